#pragma once

#include "nmk/rational.hpp"
#include "nmk/trigpoly.hpp"

#include <complex>
#include <string>
#include <vector>

namespace nmk {

/// One polyhomogeneous term  r^{k1} (log r)^q e^{i k2 θ} p(t)  with rational
/// exponents k1, k2, integer q >= 0, and a trigonometric-polynomial profile.
struct PhgTerm {
  Rational k1{0};   ///< radial exponent
  int q = 0;        ///< log power
  Rational k2{0};   ///< angular frequency (half-integers allowed)
  TrigPoly profile;
};

/// Finite sum of polyhomogeneous terms in canonical order: sorted by
/// (k1, k2, q), like terms merged, vanishing profiles dropped.
class PhgSum {
 public:
  PhgSum() = default;
  explicit PhgSum(std::vector<PhgTerm> terms);

  static PhgSum zero() { return {}; }
  static PhgSum monomial(Rational k1, int q, Rational k2, TrigPoly profile);

  bool empty() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  const std::vector<PhgTerm>& terms() const { return terms_; }

  PhgSum operator+(const PhgSum& other) const;
  PhgSum operator-(const PhgSum& other) const;
  PhgSum scaled(const RationalComplex& s) const;
  friend bool operator==(const PhgSum& a, const PhgSum& b);
  friend bool operator!=(const PhgSum& a, const PhgSum& b) { return !(a == b); }

 private:
  void canonicalize();
  std::vector<PhgTerm> terms_;
};

/// Smallest radial exponent present; the sum must be nonzero.
Rational min_radial_exponent(const PhgSum& u);

/// The model edge operator  L0 = (r ∂_r)^2 + ∂_θ^2  applied termwise:
///   r^{k1} (log r)^q e^{i k2 θ}  ->  r^{k1} e^{i k2 θ} [ (k1^2 - k2^2) L^q
///     + 2 k1 q L^{q-1} + q (q-1) L^{q-2} ],   L = log r.
PhgSum L0_apply(const PhgSum& u);

/// Exact right inverse of L0 on polyhomogeneous sums:
/// L0_apply(L0_solve(f)) == f as an identity of rationals.  Off resonance
/// (k1^2 != k2^2) the solution keeps each term's log degree; on resonance
/// (k1^2 == k2^2, k1 != 0) it raises the degree by one.  The doubly
/// degenerate pair k1 = k2 = 0 has no polyhomogeneous inverse here and is
/// rejected (unsupported-resonance).
PhgSum L0_solve(const PhgSum& f);

/// The perturbation  R = r^2 ∂_t^2:  shifts k1 by 2 and differentiates the
/// profile twice.
PhgSum R_apply(const PhgSum& u);

/// Iterated correction of the leading edge mode r^{3/2} e^{3iθ/2} B(t) under
/// L0 + R:  layer_0 = B r^{3/2} e^{3iθ/2},  layer_{j+1} = -L0_solve(R layer_j).
struct EdgeExpansion {
  std::vector<PhgSum> layers;  ///< layers[j], j = 0..depth
  PhgSum sum;                  ///< Σ_j layers[j]
  PhgSum residual;             ///< (L0 + R) sum = R layers[depth]
};

/// Build the expansion to the requested depth (depth >= 0).
EdgeExpansion edge_expansion(const TrigPoly& boundary_profile, int depth);

/// Exact coordinate derivatives.  ∂_r lowers the radial exponent by one (with
/// the log chain term); ∂_θ multiplies by i k2; ∂_t differentiates the profile.
PhgSum partial_r(const PhgSum& u);
PhgSum partial_theta(const PhgSum& u);
PhgSum partial_t(const PhgSum& u);

/// Termwise radial primitive  ∫_0^r s^{k1} (log s)^q ds, defined for k1 > -1
/// (divergent-primitive otherwise):
///   ∫_0^r s^a (log s)^q ds = r^{a+1} Σ_{j=0}^q (-1)^j q!/(q-j)! (a+1)^{-(j+1)} L^{q-j}.
PhgSum radial_primitive(const PhgSum& u);

/// Numeric evaluation at a point (r > 0), for floating cross-checks only.
std::complex<long double> eval(const PhgSum& u, long double r, long double theta,
                               long double t);

/// Human-readable rendering, e.g. "(1/10)·cos t·r^{7/2}·e^{3iθ/2}".
std::string to_pretty_string(const PhgSum& u);

/// Exact JSON serialization (rationals as strings) and its inverse.
std::string phg_to_json(const PhgSum& u);
PhgSum phg_from_json(const std::string& text);

}  // namespace nmk
