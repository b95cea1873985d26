// Copyright 2026 The qec5 Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qec5 {

/// Malformed text input. Line and column are 1-based; 0 means "not applicable".
class ParseError : public std::runtime_error {
   public:
    ParseError(const std::string &message, size_t line = 0, size_t column = 0)
        : std::runtime_error(decorate(message, line, column)), line_(line), column_(column) {
    }

    size_t line() const noexcept {
        return line_;
    }
    size_t column() const noexcept {
        return column_;
    }

   private:
    static std::string decorate(const std::string &message, size_t line, size_t column) {
        if (line == 0) {
            return message;
        }
        return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
    }

    size_t line_;
    size_t column_;
};

/// A synthesis precondition or constraint did not hold.
class SynthesisError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// The simulated circuit does not implement a working code.
class SimulationError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace qec5
