/* Copyright 2026 The ReasonAttn Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef REASONATTN_TOKENS_H_
#define REASONATTN_TOKENS_H_

#include <cstddef>
#include <string>
#include <string_view>

namespace reasonattn {

// Lowercases ASCII letters, trims, and collapses internal whitespace runs to a
// single space. Every category, attribute and predicate comparison in the
// library goes through this.
std::string NormalizeToken(std::string_view raw);

// Maps a text position (byte offset) to a 1-based (line, column) pair.
struct TextPosition {
  std::size_t line = 0;
  std::size_t column = 0;
};
TextPosition PositionOf(std::string_view text, std::size_t offset);

}  // namespace reasonattn

#endif  // REASONATTN_TOKENS_H_
