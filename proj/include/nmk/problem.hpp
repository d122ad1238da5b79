#pragma once

#include "nmk/graded.hpp"
#include "nmk/ledger.hpp"

namespace nmk {

/// A nonlinear map phi together with its linearization, an approximate right
/// inverse psi, and the bilinear quadratic-error term E tied to psi by the
/// defining identity
///   dphi(u) psi(u) v = v + E(u)(phi(u), v).
/// Implementations must be usable concurrently from const references (no
/// mutable state in the virtual calls).
class TameProblem {
public:
  virtual ~TameProblem() = default;

  virtual GradedElement phi(const GradedElement& u) const = 0;
  virtual GradedElement dphi(const GradedElement& u, const GradedElement& w) const = 0;
  virtual GradedElement psi(const GradedElement& u, const GradedElement& v) const = 0;
  virtual GradedElement quad_error(const GradedElement& u, const GradedElement& w,
                                   const GradedElement& v) const = 0;

  /// Declared constants (the ledger is computed from these, not estimated).
  virtual const TameConstants& constants() const = 0;
};

}  // namespace nmk
