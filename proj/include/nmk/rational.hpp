#pragma once

#include "nmk/errors.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace nmk {

/// Arbitrary-precision rational scalar.  All edge-calculus arithmetic is exact:
/// apply/solve round trips and expansion coefficients are identities of
/// rationals, never approximations.
using Rational = boost::multiprecision::cpp_rational;

/// Gaussian rational a + b i.  Hand-rolled because the edge calculus only needs
/// ring operations plus conjugation; no division in anger.
struct RationalComplex {
  Rational re{0};
  Rational im{0};

  RationalComplex() = default;
  RationalComplex(Rational r) : re(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  RationalComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  RationalComplex(int r) : re(r) {}  // NOLINT(google-explicit-constructor)

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }

  RationalComplex conj() const { return {re, -im}; }
  /// Multiplication by i: i (a + b i) = -b + a i.
  RationalComplex times_i() const { return {-im, re}; }

  friend RationalComplex operator+(const RationalComplex& a, const RationalComplex& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend RationalComplex operator-(const RationalComplex& a, const RationalComplex& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend RationalComplex operator-(const RationalComplex& a) { return {-a.re, -a.im}; }
  friend RationalComplex operator*(const RationalComplex& a, const RationalComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend RationalComplex operator*(const Rational& s, const RationalComplex& a) {
    return {s * a.re, s * a.im};
  }
  friend bool operator==(const RationalComplex& a, const RationalComplex& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const RationalComplex& a, const RationalComplex& b) {
    return !(a == b);
  }
};

/// Exact division a / b; b must be nonzero.
RationalComplex div(const RationalComplex& a, const RationalComplex& b);

/// Canonical text form: "p" or "p/q" with q > 0 and the fraction reduced.
std::string rational_to_string(const Rational& r);

/// Parse "p" or "p/q" (optional leading sign); anything else is rejected.
Rational rational_from_string(const std::string& text);

/// Convert exactly representable rationals for numeric evaluation.
long double to_long_double(const Rational& r);

}  // namespace nmk
