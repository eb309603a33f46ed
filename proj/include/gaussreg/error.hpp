// SPDX-License-Identifier: MIT
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gaussreg {

enum class ErrorCode {
  kInvalidArgument,
  kNonFiniteValue,
  kDimensionMismatch,
  kEmptyMeasure,
  kLpInfeasible,
  kSupportTooLarge,
  kMassNotBalanced,
  kUnknownDensity,
  kUnknownMap,
  kDegenerateFit,
  kMomentDiverged,
  kConfigParse,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; `code()` identifies the failure
/// class, `what()` carries a human-readable message naming the culprit.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gaussreg
