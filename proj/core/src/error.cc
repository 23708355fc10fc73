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
#include "reasonattn/error.h"

#include <utility>

namespace reasonattn {

ParseError::ParseError(const std::string& message, std::size_t line,
                       std::size_t column)
    : Error(line == 0 ? message
                      : message + " (line " + std::to_string(line) +
                            ", column " + std::to_string(column) + ")"),
      line_(line),
      column_(column) {}

ValidationError::ValidationError(const std::string& message,
                                 std::string subject)
    : Error(message), subject_(std::move(subject)) {}

}  // namespace reasonattn
