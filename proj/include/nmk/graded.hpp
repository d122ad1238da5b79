#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "nmk/errors.hpp"

namespace nmk {

/// Mode lattice of a truncated Fourier series on the circle.  Half-integer
/// modes live on the double cover (anti-periodic sections); products obey
///   integer x integer -> integer, half x half -> integer, integer x half -> half.
enum class Lattice { integer, half_integer };

const char* to_string(Lattice lat) noexcept;

/// Finite Fourier sum  v(t) = Σ_n v̂_n e^{i n t}  with n ranging over either the
/// integer or the half-integer lattice.  Frequencies are stored doubled
/// (key = 2n) so half-integers stay exact; the key parity is pinned to the
/// lattice.  Exact-zero coefficients are never stored, so equal elements have
/// identical mode maps.  Immutable value semantics: every operation returns a
/// fresh element.
class GradedElement {
public:
  using Coeff = std::complex<double>;
  using ModeMap = std::map<int, Coeff>;

  explicit GradedElement(Lattice lat = Lattice::integer) : lattice_(lat) {}

  static GradedElement zero(Lattice lat) { return GradedElement(lat); }
  /// Constant function (integer lattice, single n=0 mode).
  static GradedElement constant(Coeff value);
  /// Single mode with doubled frequency n2 (parity must match the lattice).
  static GradedElement single(Lattice lat, int n2, Coeff c);

  Lattice lattice() const { return lattice_; }
  bool empty() const { return modes_.empty(); }
  std::size_t mode_count() const { return modes_.size(); }
  const ModeMap& modes() const { return modes_; }

  /// Largest doubled frequency magnitude present (0 when empty).
  int bandwidth2() const;
  /// Largest |n| present, as a real (half-integers allowed).
  double bandwidth() const { return bandwidth2() / 2.0; }

  /// Set coefficient of doubled frequency n2; an exact zero erases the mode.
  void set(int n2, Coeff c);
  /// Coefficient of doubled frequency n2 (zero when absent).
  Coeff at(int n2) const;

  /// Graded norm  |v|_s = Σ_n |v̂_n| (1+|n|)^s,  s ≥ 0.
  double norm(double s) const;

  /// Pointwise evaluation  Σ v̂_n e^{i n t}  (period 4π on the half lattice).
  Coeff eval(double t) const;

  /// Real-valuedness test: v̂_{-n} = conj(v̂_n) within tol.
  bool is_real(double tol = 1e-12) const;

  bool operator==(const GradedElement& other) const {
    return lattice_ == other.lattice_ && modes_ == other.modes_;
  }

private:
  Lattice lattice_;
  ModeMap modes_;
};

/// Sum of two elements on the same lattice.
GradedElement add(const GradedElement& a, const GradedElement& b);
/// Scalar multiple.
GradedElement scale(const GradedElement& v, std::complex<double> lambda);
/// Convolution product; result lattice follows the product rules above.
/// Satisfies the algebra bound |uv|_s ≤ |u|_s |v|_s for every s ≥ 0.
GradedElement pointwise_mul(const GradedElement& a, const GradedElement& b);

/// Sharp spectral cutoff family: S_θ retains every mode with (1+|n|) ≤ θ.
/// Both smoothing inequalities
///   |S_θ v|_s ≤ θ^{s-t} |v|_t          (s ≥ t)
///   |v − S_θ v|_s ≤ θ^{s-t} |v|_t      (s ≤ t)
/// hold with constant exactly 1, so Ĉ_{s,t} ≡ 1.
struct SmoothingFamily {
  double chat(double /*s*/, double /*t*/) const { return 1.0; }
  double log_chat(double /*s*/, double /*t*/) const { return 0.0; }

  /// Apply S_θ (θ > 1 required).
  GradedElement apply(const GradedElement& v, double theta) const;
  /// Apply S_θ with θ given as log θ (θ may exceed double range).
  GradedElement apply_log(const GradedElement& v, double log_theta) const;
};

GradedElement smooth(const GradedElement& v, double theta);
GradedElement smooth_log(const GradedElement& v, double log_theta);

/// Uniform sample of v at the M grid points t_j = 4π j / M (one period of the
/// double cover; two periods of an integer-lattice element — harmless for
/// quadrature, required for half-integer modes).
std::vector<std::complex<double>> sample_grid(const GradedElement& v, int M);

/// Grid sup norm  max_j |v(t_j)|  over the M-point grid above.
double c0_norm(const GradedElement& v, int M);

struct Reciprocal {
  GradedElement value;       ///< projection of 1/u onto |n| ≤ bandwidth_out
  double aliasing_residual;  ///< max_j |u(t_j)·value(t_j) − 1| on the grid
  double min_modulus;        ///< min_j |u(t_j)| observed on the grid
};

/// Guarded pointwise reciprocal: sample u on a ≥4x oversampled grid, invert
/// pointwise, project back to the requested bandwidth.  Fails with
/// near-singular-inverse when min_j |u(t_j)| < floor.
Reciprocal reciprocal(const GradedElement& u, int bandwidth_out, double floor);

/// Versioned structured-text serialization; round trips are bit-exact.
std::string to_json(const GradedElement& v);
GradedElement graded_from_json(const std::string& text);

inline const char* to_string(Lattice lat) noexcept {
  return lat == Lattice::integer ? "integer" : "half-integer";
}

}  // namespace nmk
