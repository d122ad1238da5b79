#pragma once

#include "nmk/rational.hpp"

#include <map>
#include <string>

namespace nmk {

/// Trigonometric polynomial  p(t) = Σ_n c_n e^{i n t}  over integer
/// frequencies with Gaussian-rational coefficients.  Exact-zero coefficients
/// are never stored, so equality is map equality.
class TrigPoly {
 public:
  using ModeMap = std::map<int, RationalComplex>;

  TrigPoly() = default;

  static TrigPoly zero() { return {}; }
  static TrigPoly constant(RationalComplex value);
  /// e^{i n t}
  static TrigPoly expi(int n, RationalComplex coeff = RationalComplex(1));
  /// cos(k t) = (e^{ikt} + e^{-ikt}) / 2
  static TrigPoly cosine(int k);
  /// sin(k t) = (e^{ikt} - e^{-ikt}) / (2i)
  static TrigPoly sine(int k);

  bool empty() const { return modes_.empty(); }
  std::size_t mode_count() const { return modes_.size(); }
  const ModeMap& modes() const { return modes_; }
  RationalComplex at(int n) const;
  void set(int n, RationalComplex c);

  /// Largest |n| present (0 for the zero polynomial).
  int bandwidth() const;

  /// True when p(t) is real-valued for all t:  c_{-n} = conj(c_n).
  bool is_real_valued() const;

  TrigPoly operator+(const TrigPoly& other) const;
  TrigPoly operator-(const TrigPoly& other) const;
  TrigPoly operator*(const TrigPoly& other) const;
  TrigPoly scaled(const RationalComplex& s) const;
  friend bool operator==(const TrigPoly& a, const TrigPoly& b) {
    return a.modes_ == b.modes_;
  }
  friend bool operator!=(const TrigPoly& a, const TrigPoly& b) { return !(a == b); }

  /// d/dt: mode n picks up a factor i n.
  TrigPoly derivative() const;
  /// d^2/dt^2: mode n picks up a factor -n^2 (the constant mode drops out).
  TrigPoly second_derivative() const;

 private:
  ModeMap modes_;
};

/// Human-readable form in the cos/sin basis where the coefficients allow it
/// (e.g. "cos t", "(1/2)·sin 2t + 3"), falling back to explicit e^{int} terms.
std::string to_pretty_string(const TrigPoly& p);

}  // namespace nmk
