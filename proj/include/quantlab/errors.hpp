#ifndef QUANTLAB_ERRORS_HPP_
#define QUANTLAB_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace quantlab {

enum class ErrorCode {
  invalid_argument,
  non_finite_input,
  ill_conditioned_basis,
  degenerate_at_origin,
  degenerate_gradient,
  hypothesis_violation,
  max_iterations,
  fast_path_unavailable,
  degenerate_solve,
  ambiguous_face,
  inconsistent_code,
  dimension_too_large,
  enumeration_budget_exceeded,
  acceptance_too_low,
  insufficient_data,
  config,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::non_finite_input: return "NonFiniteInput";
    case ErrorCode::ill_conditioned_basis: return "IllConditionedBasis";
    case ErrorCode::degenerate_at_origin: return "DegenerateAtOrigin";
    case ErrorCode::degenerate_gradient: return "DegenerateGradient";
    case ErrorCode::hypothesis_violation: return "HypothesisViolation";
    case ErrorCode::max_iterations: return "MaxIterations";
    case ErrorCode::fast_path_unavailable: return "FastPathUnavailable";
    case ErrorCode::degenerate_solve: return "Degenerate";
    case ErrorCode::ambiguous_face: return "AmbiguousFace";
    case ErrorCode::inconsistent_code: return "InconsistentCode";
    case ErrorCode::dimension_too_large: return "DimensionTooLarge";
    case ErrorCode::enumeration_budget_exceeded: return "EnumerationBudgetExceeded";
    case ErrorCode::acceptance_too_low: return "AcceptanceTooLow";
    case ErrorCode::insufficient_data: return "InsufficientData";
    case ErrorCode::config: return "ConfigError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace quantlab

#endif  // QUANTLAB_ERRORS_HPP_
