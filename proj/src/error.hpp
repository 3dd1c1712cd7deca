// Copyright 2026 The relpii Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace relpii {

// Values are part of the C ABI (relpii_status) and of the CLI exit codes.
enum class ErrorCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kIo = 3,
  kParse = 4,
  kValidation = 5,
  kNotFound = 6,
  kMissingVar = 7,
  kUnknownVar = 8,
  kProvider = 9,
  kAuth = 10,
  kTimeout = 11,
  kFormat = 12,
  kPiiDropped = 13,
  kEmptyQuestion = 14,
  kReconcile = 15,
  kRangeOutOfBounds = 16,
  kVerdictParse = 17,
  kRevisionConflict = 18,
  kUnknownSampleId = 19,
  kInvalidInput = 20,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the detector and parser paths; keeps the model output for audit.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::string raw)
      : Error(ErrorCode::kParse, message), raw_(std::move(raw)) {}
  const std::string& raw() const noexcept { return raw_; }

 private:
  std::string raw_;
};

class VerdictParseError : public Error {
 public:
  VerdictParseError(const std::string& message, std::string raw)
      : Error(ErrorCode::kVerdictParse, message), raw_(std::move(raw)) {}
  const std::string& raw() const noexcept { return raw_; }

 private:
  std::string raw_;
};

}  // namespace relpii
