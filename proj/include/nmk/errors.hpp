#pragma once

#include <stdexcept>
#include <string>

namespace nmk {

/// Classified failure modes; each maps to exactly one CLI exit code
/// (see tools/ and README).
enum class ErrCode {
  invalid_parameter,
  invalid_operands,
  near_singular_inverse,
  incomplete_constants,
  below_minimum_scale,
  ball_exit,
  divergence,
  oracle_unavailable,
  unsupported_resonance,
  divergent_primitive,
  invalid_degree,
  degenerate_direction,
  dimension_excluded,
  insufficient_radial_span,
  monodromy_error,
  io_error,
};

const char* to_string(ErrCode code) noexcept;

/// Exception carrying a classified error code plus a human-readable message.
class Error : public std::runtime_error {
public:
  Error(ErrCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrCode code() const noexcept { return code_; }

private:
  ErrCode code_;
};

inline const char* to_string(ErrCode code) noexcept {
  switch (code) {
    case ErrCode::invalid_parameter: return "invalid-parameter";
    case ErrCode::invalid_operands: return "invalid-operands";
    case ErrCode::near_singular_inverse: return "near-singular-inverse";
    case ErrCode::incomplete_constants: return "incomplete-constants";
    case ErrCode::below_minimum_scale: return "below-minimum-scale";
    case ErrCode::ball_exit: return "ball-exit";
    case ErrCode::divergence: return "divergence";
    case ErrCode::oracle_unavailable: return "oracle-unavailable";
    case ErrCode::unsupported_resonance: return "unsupported-resonance";
    case ErrCode::divergent_primitive: return "divergent-primitive";
    case ErrCode::invalid_degree: return "invalid-degree";
    case ErrCode::degenerate_direction: return "degenerate-direction";
    case ErrCode::dimension_excluded: return "dimension-excluded";
    case ErrCode::insufficient_radial_span: return "insufficient-radial-span";
    case ErrCode::monodromy_error: return "monodromy-error";
    case ErrCode::io_error: return "io-error";
  }
  return "unknown";
}

}  // namespace nmk
