#pragma once

#include "nmk/phg.hpp"

#include <string>
#include <vector>

namespace nmk {

/// Differential form on the edge coordinates (r, θ, t) with polyhomogeneous
/// coefficients.  Component order is fixed by degree:
///   0: [scalar]
///   1: [dr, dθ, dt]
///   2: [dr∧dθ, dr∧dt, dθ∧dt]
///   3: [dr∧dθ∧dt]
struct PolarForm {
  int degree = 0;
  std::vector<PhgSum> components;

  static PolarForm scalar(PhgSum f);
  static PolarForm one_form(PhgSum dr, PhgSum dtheta, PhgSum dt);

  bool is_zero() const;
  friend bool operator==(const PolarForm& a, const PolarForm& b);
  friend bool operator!=(const PolarForm& a, const PolarForm& b) { return !(a == b); }
};

/// Degree- and size-checked linear algebra.
PolarForm add(const PolarForm& a, const PolarForm& b);
PolarForm sub(const PolarForm& a, const PolarForm& b);
PolarForm scaled(const PolarForm& a, const RationalComplex& s);

/// Exterior derivative.  Degree-3 input has no derivative in three coordinates
/// (invalid-degree).  All differentiation is exact.
PolarForm exterior_derivative(const PolarForm& form);

/// d∘d = 0 check helper: true when exterior_derivative(form) vanishes.
bool is_closed(const PolarForm& form);

/// Radial primitive of a 1-form vanishing at the edge r = 0: the scalar
///   ζ(r, θ, t) = ∫_0^r A(s, θ, t) ds     (A = dr-component)
/// normalized by ζ(0) = 0.  For closed η the recovery η = dζ is exact.  Every
/// component must have strictly positive radial exponents (invalid-parameter
/// otherwise); the integral itself needs k1 > -1 (divergent-primitive).
PolarForm radial_antiderivative(const PolarForm& eta);

/// η - d(radial_antiderivative(η)): vanishes exactly for closed η; for
/// non-closed η its radial exponents exceed those of the curl dη by one.
PolarForm primitive_remainder(const PolarForm& eta);

/// Human-readable rendering, e.g. "(cos t·r^{1/2}) dr + (r^{3/2}) dθ".
std::string to_pretty_string(const PolarForm& form);

/// Exact JSON serialization (rationals as strings) and its inverse.
std::string form_to_json(const PolarForm& form);
PolarForm form_from_json(const std::string& text);

}  // namespace nmk
