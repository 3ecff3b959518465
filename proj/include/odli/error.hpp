// Copyright 2026 The odli-reach Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ODLI__ERROR_HPP_
#define ODLI__ERROR_HPP_

#include <stdexcept>
#include <string>

namespace odli
{

enum class ErrorCode {
  invalid_argument = 1,
  parse = 2,
  io = 3,
  incomplete_log = 4,
  internal = 5,
};

/// Exception carrying a machine-readable category; the C API maps it onto status codes.
class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string & message) : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string & message)
{
  throw Error(code, message);
}

inline void require(bool condition, const std::string & message)
{
  if (!condition) {
    throw Error(ErrorCode::invalid_argument, message);
  }
}

}  // namespace odli

#endif  // ODLI__ERROR_HPP_
