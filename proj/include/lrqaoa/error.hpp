// Copyright 2026 The lrqaoa Authors
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

#ifndef LRQAOA_ERROR_HPP
#define LRQAOA_ERROR_HPP

#include <stdexcept>
#include <string>

namespace lrqaoa {

enum class ErrorCode {
    InvalidArgument,
    DimensionMismatch,
    SizeLimit,
    FitFailed,
    ParseError,
    AsymmetricMatrix,
    ConfigError,
    IoError,
};

inline const char *to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument:
            return "invalid_argument";
        case ErrorCode::DimensionMismatch:
            return "dimension_mismatch";
        case ErrorCode::SizeLimit:
            return "size_limit";
        case ErrorCode::FitFailed:
            return "fit_failed";
        case ErrorCode::ParseError:
            return "parse_error";
        case ErrorCode::AsymmetricMatrix:
            return "asymmetric_matrix";
        case ErrorCode::ConfigError:
            return "config_error";
        case ErrorCode::IoError:
            return "io_error";
    }
    return "unknown";
}

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status.
class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string &message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

   private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string &message) { throw Error(code, message); }

inline void require(bool condition, ErrorCode code, const std::string &message) {
    if (!condition) {
        fail(code, message);
    }
}

}  // namespace lrqaoa

#endif  // LRQAOA_ERROR_HPP
