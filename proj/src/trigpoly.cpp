#include "nmk/trigpoly.hpp"

#include <cstdlib>
#include <sstream>

namespace nmk {

TrigPoly TrigPoly::constant(RationalComplex value) {
  TrigPoly p;
  p.set(0, std::move(value));
  return p;
}

TrigPoly TrigPoly::expi(int n, RationalComplex coeff) {
  TrigPoly p;
  p.set(n, std::move(coeff));
  return p;
}

TrigPoly TrigPoly::cosine(int k) {
  TrigPoly p;
  const RationalComplex half(Rational(1, 2));
  p.set(k, half);
  p.set(-k, half);
  return p;
}

TrigPoly TrigPoly::sine(int k) {
  if (k == 0) return {};
  TrigPoly p;
  // 1/(2i) = -i/2
  p.set(k, RationalComplex(Rational(0), Rational(-1, 2)));
  p.set(-k, RationalComplex(Rational(0), Rational(1, 2)));
  return p;
}

RationalComplex TrigPoly::at(int n) const {
  auto it = modes_.find(n);
  return it == modes_.end() ? RationalComplex() : it->second;
}

void TrigPoly::set(int n, RationalComplex c) {
  if (c.is_zero())
    modes_.erase(n);
  else
    modes_[n] = std::move(c);
}

int TrigPoly::bandwidth() const {
  int bw = 0;
  for (const auto& [n, c] : modes_) bw = std::max(bw, std::abs(n));
  return bw;
}

bool TrigPoly::is_real_valued() const {
  for (const auto& [n, c] : modes_)
    if (at(-n) != c.conj()) return false;
  return true;
}

TrigPoly TrigPoly::operator+(const TrigPoly& other) const {
  TrigPoly out = *this;
  for (const auto& [n, c] : other.modes_) out.set(n, out.at(n) + c);
  return out;
}

TrigPoly TrigPoly::operator-(const TrigPoly& other) const {
  TrigPoly out = *this;
  for (const auto& [n, c] : other.modes_) out.set(n, out.at(n) - c);
  return out;
}

TrigPoly TrigPoly::operator*(const TrigPoly& other) const {
  TrigPoly out;
  for (const auto& [n, a] : modes_)
    for (const auto& [m, b] : other.modes_) out.set(n + m, out.at(n + m) + a * b);
  return out;
}

TrigPoly TrigPoly::scaled(const RationalComplex& s) const {
  TrigPoly out;
  for (const auto& [n, c] : modes_) out.set(n, s * c);
  return out;
}

TrigPoly TrigPoly::derivative() const {
  TrigPoly out;
  for (const auto& [n, c] : modes_) out.set(n, (Rational(n) * c).times_i());
  return out;
}

TrigPoly TrigPoly::second_derivative() const {
  TrigPoly out;
  for (const auto& [n, c] : modes_) out.set(n, Rational(-n) * Rational(n) * c);
  return out;
}

namespace {

/// Coefficient rendering: "3", "1/2", "(1/2+1/3i)", "i", "-2/3i".
std::string coeff_string(const RationalComplex& c) {
  if (c.is_real()) return rational_to_string(c.re);
  if (c.re == 0) {
    if (c.im == 1) return "i";
    if (c.im == -1) return "-i";
    return rational_to_string(c.im) + "i";
  }
  std::string im = rational_to_string(c.im);
  std::string joined = im[0] == '-' ? im + "i" : "+" + im + "i";
  return "(" + rational_to_string(c.re) + joined + ")";
}

/// Wrap a coefficient in parentheses when it would read ambiguously as a
/// product prefix (fractions, sums, negatives).
std::string factor_string(const RationalComplex& c) {
  std::string s = coeff_string(c);
  const bool simple = s.find('/') == std::string::npos && s.find('+') == std::string::npos &&
                      s.find('-', 1) == std::string::npos && s[0] != '-' &&
                      s[0] != '(';
  return simple ? s : (s[0] == '(' ? s : "(" + s + ")");
}

std::string angle_string(const char* fn, int k) {
  std::ostringstream out;
  out << fn << ' ';
  if (k != 1) out << k;
  out << 't';
  return out.str();
}

}  // namespace

std::string to_pretty_string(const TrigPoly& p) {
  if (p.empty()) return "0";

  // Prefer the cos/sin basis: c_n e^{int} + c_{-n} e^{-int} =
  // (c_n + c_{-n}) cos nt + i (c_n - c_{-n}) sin nt, exact in rationals.
  std::vector<std::string> pieces;
  if (!p.at(0).is_zero()) pieces.push_back(coeff_string(p.at(0)));
  for (int n = 1; n <= p.bandwidth(); ++n) {
    const RationalComplex plus = p.at(n), minus = p.at(-n);
    if (plus.is_zero() && minus.is_zero()) continue;
    const RationalComplex cos_c = plus + minus;
    const RationalComplex sin_c = (plus - minus).times_i();
    if (!cos_c.is_zero()) {
      if (cos_c == RationalComplex(1))
        pieces.push_back(angle_string("cos", n));
      else
        pieces.push_back(factor_string(cos_c) + "·" + angle_string("cos", n));
    }
    if (!sin_c.is_zero()) {
      if (sin_c == RationalComplex(1))
        pieces.push_back(angle_string("sin", n));
      else
        pieces.push_back(factor_string(sin_c) + "·" + angle_string("sin", n));
    }
  }
  std::string out;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (i > 0) out += " + ";
    out += pieces[i];
  }
  return out;
}

}  // namespace nmk
