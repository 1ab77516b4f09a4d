// Copyright 2026 The metriq Authors
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
#include <string_view>

namespace metriq {

enum class ErrorCode {
  kNotSquare,
  kNotHermitian,
  kNotPsd,
  kNotPositiveDefinite,
  kDimMismatch,
  kSupernormalized,
  kMetricExceedsIdentity,
  kBrokenPtRegime,
  kNegativeParameters,
  kInvalidDensityOperator,
  kNotNormalized,
  kSingularDesign,
  kDegenerateMetric,
  kVanishingSuccessProbability,
  kInvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotSquare: return "NotSquare";
    case ErrorCode::kNotHermitian: return "NotHermitian";
    case ErrorCode::kNotPsd: return "NotPsd";
    case ErrorCode::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::kDimMismatch: return "DimMismatch";
    case ErrorCode::kSupernormalized: return "Supernormalized";
    case ErrorCode::kMetricExceedsIdentity: return "MetricExceedsIdentity";
    case ErrorCode::kBrokenPtRegime: return "BrokenPtRegime";
    case ErrorCode::kNegativeParameters: return "NegativeParameters";
    case ErrorCode::kInvalidDensityOperator: return "InvalidDensityOperator";
    case ErrorCode::kNotNormalized: return "NotNormalized";
    case ErrorCode::kSingularDesign: return "SingularDesign";
    case ErrorCode::kDegenerateMetric: return "DegenerateMetric";
    case ErrorCode::kVanishingSuccessProbability: return "VanishingSuccessProbability";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Domain error raised by every metriq operation whose precondition fails.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Malformed input files (JSON schema violations, unreadable paths).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace metriq
