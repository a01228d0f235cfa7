// Copyright 2026 The qaoa-itlw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace itlw {

/// Caller passed a value that violates an operation's precondition.
class InputError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Problem size exceeds what exhaustive methods are allowed to touch.
class SizeError : public std::length_error {
   public:
    using std::length_error::length_error;
};

/// Malformed graph, config or record file. Carries the offending location.
class ParseError : public std::runtime_error {
   public:
    ParseError(const std::string &what, std::string field, int line = 0)
        : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ", field '" + field + "')"
                                      : what + " (field '" + field + "')"),
          field_(std::move(field)),
          line_(line) {
    }

    const std::string &field() const noexcept {
        return field_;
    }
    int line() const noexcept {
        return line_;
    }

   private:
    std::string field_;
    int line_;
};

/// Experiment configuration is inconsistent; raised before any work runs.
class ConfigError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace itlw
