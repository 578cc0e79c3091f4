#include "exitrate/error.hpp"

namespace exitrate {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEllipticityViolation: return "EllipticityViolation";
    case ErrorCode::kNonFiniteCoefficient: return "NonFiniteCoefficient";
    case ErrorCode::kInvalidProblem: return "InvalidProblem";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kNonconformingSpacing: return "NonconformingSpacing";
    case ErrorCode::kInvalidPolicy: return "InvalidPolicy";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kNonPositiveEigenvector: return "NonPositiveEigenvector";
    case ErrorCode::kReducible: return "Reducible";
    case ErrorCode::kIllConditioned: return "IllConditioned";
    case ErrorCode::kNullVectorNotUnique: return "NullVectorNotUnique";
    case ErrorCode::kTooLargeForDense: return "TooLargeForDense";
    case ErrorCode::kNoCertificate: return "NoCertificate";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kUnbounded: return "Unbounded";
    case ErrorCode::kTooFewSurvivors: return "TooFewSurvivors";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace exitrate
