// Copyright 2026 The flagmetric Authors
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

#ifndef FLAGMETRIC_ERRORS_HPP
#define FLAGMETRIC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace flagmetric {

enum class ErrorCode {
  RankDeficient,
  DimensionMismatch,
  DegeneratePairing,
  InvalidDimension,
  NotProper,
  OutsideDomain,
  NotConvex,
  NotDualConvexAt,
  SpanningFailure,
  NotAnAutomorphism,
  NotInDomain,
  NotPD,
  NoWitness,
  FiberExitsImmediately,
  ParseError,
  ValidationError,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DegeneratePairing: return "DegeneratePairing";
    case ErrorCode::InvalidDimension: return "InvalidDimension";
    case ErrorCode::NotProper: return "NotProper";
    case ErrorCode::OutsideDomain: return "OutsideDomain";
    case ErrorCode::NotConvex: return "NotConvex";
    case ErrorCode::NotDualConvexAt: return "NotDualConvexAt";
    case ErrorCode::SpanningFailure: return "SpanningFailure";
    case ErrorCode::NotAnAutomorphism: return "NotAnAutomorphism";
    case ErrorCode::NotInDomain: return "NotInDomain";
    case ErrorCode::NotPD: return "NotPD";
    case ErrorCode::NoWitness: return "NoWitness";
    case ErrorCode::FiberExitsImmediately: return "FiberExitsImmediately";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

/// Every failure raised by the library. The code identifies the condition;
/// the message carries the details (offending field, witness, etc.).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  // Validation-type failures map to CLI exit status 1, everything else to 2.
  bool is_validation() const noexcept {
    return code_ == ErrorCode::ParseError || code_ == ErrorCode::ValidationError ||
           code_ == ErrorCode::InvalidDimension || code_ == ErrorCode::DimensionMismatch ||
           code_ == ErrorCode::OutsideDomain;
  }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace flagmetric

#endif  // FLAGMETRIC_ERRORS_HPP
