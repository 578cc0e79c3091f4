#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace exitrate {

enum class ErrorCode {
  kEllipticityViolation,
  kNonFiniteCoefficient,
  kInvalidProblem,
  kParse,
  kNonconformingSpacing,
  kInvalidPolicy,
  kNoConvergence,
  kNonPositiveEigenvector,
  kReducible,
  kIllConditioned,
  kNullVectorNotUnique,
  kTooLargeForDense,
  kNoCertificate,
  kTooLarge,
  kInfeasible,
  kUnbounded,
  kTooFewSurvivors,
  kInvalidArgument,
  kIo,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map them to diagnostics.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace exitrate
