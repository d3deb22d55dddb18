#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace renewal {

enum class ErrorCode {
  invalid_parameter,
  support_exhausted,
  incompatible_grids,
  not_normalized,
  step_too_coarse,
  horizon_exceeded,
  no_component_found,
  negative_h,
  no_common_component,
  thinning_probability_exceeds_one,
  insufficient_points,
  finite_support,
  config,
};

std::string_view to_string(ErrorCode code);

// Every recoverable failure in the library surfaces as this exception; the
// code is the stable, machine-readable part.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_parameter: return "invalid-parameter";
    case ErrorCode::support_exhausted: return "support-exhausted";
    case ErrorCode::incompatible_grids: return "incompatible-grids";
    case ErrorCode::not_normalized: return "not-normalized";
    case ErrorCode::step_too_coarse: return "step-too-coarse";
    case ErrorCode::horizon_exceeded: return "horizon-exceeded";
    case ErrorCode::no_component_found: return "no-component-found";
    case ErrorCode::negative_h: return "negative-H";
    case ErrorCode::no_common_component: return "no-common-component";
    case ErrorCode::thinning_probability_exceeds_one: return "thinning-probability-exceeds-one";
    case ErrorCode::insufficient_points: return "insufficient-points";
    case ErrorCode::finite_support: return "finite-support";
    case ErrorCode::config: return "config";
  }
  return "unknown";
}

}  // namespace renewal
