// SPDX-License-Identifier: MIT
#include "gaussreg/error.hpp"

namespace gaussreg {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNonFiniteValue: return "NonFiniteValue";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kEmptyMeasure: return "EmptyMeasure";
    case ErrorCode::kLpInfeasible: return "LpInfeasible";
    case ErrorCode::kSupportTooLarge: return "SupportTooLarge";
    case ErrorCode::kMassNotBalanced: return "MassNotBalanced";
    case ErrorCode::kUnknownDensity: return "UnknownDensity";
    case ErrorCode::kUnknownMap: return "UnknownMap";
    case ErrorCode::kDegenerateFit: return "DegenerateFit";
    case ErrorCode::kMomentDiverged: return "MomentDiverged";
    case ErrorCode::kConfigParse: return "ConfigParse";
  }
  return "Unknown";
}

}  // namespace gaussreg
