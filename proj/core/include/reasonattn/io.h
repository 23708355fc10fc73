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
#ifndef REASONATTN_IO_H_
#define REASONATTN_IO_H_

#include <string>
#include <string_view>

#include "reasonattn/error.h"

namespace reasonattn {

// Raised when a file cannot be read or written; `path()` names it.
class IoError : public Error {
 public:
  IoError(const std::string& message, std::string path)
      : Error(message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

std::string ReadFile(const std::string& path);
// Creates parent directories as needed.
void WriteFile(const std::string& path, std::string_view contents);

}  // namespace reasonattn

#endif  // REASONATTN_IO_H_
