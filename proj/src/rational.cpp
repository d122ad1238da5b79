#include "nmk/rational.hpp"

#include <cctype>

namespace nmk {

RationalComplex div(const RationalComplex& a, const RationalComplex& b) {
  const Rational denom = b.re * b.re + b.im * b.im;
  if (denom == 0) throw Error(ErrCode::invalid_operands, "division by zero");
  return {(a.re * b.re + a.im * b.im) / denom, (a.im * b.re - a.re * b.im) / denom};
}

std::string rational_to_string(const Rational& r) {
  const auto num = boost::multiprecision::numerator(r);
  const auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational rational_from_string(const std::string& text) {
  // cpp_rational's own parser accepts the "p/q" grammar but also tolerates
  // some junk; validate the shape first so errors carry our contract.
  const auto fail = [&]() -> Rational {
    throw Error(ErrCode::invalid_operands, "malformed rational literal: " + text);
  };
  std::size_t i = 0;
  const auto digits = [&](std::size_t from) {
    std::size_t j = from;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    return j;
  };
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) ++i;
  std::size_t end_num = digits(i);
  if (end_num == i) return fail();
  if (end_num < text.size()) {
    if (text[end_num] != '/') return fail();
    std::size_t den_start = end_num + 1;
    std::size_t end_den = digits(den_start);
    if (end_den == den_start || end_den != text.size()) return fail();
  }
  try {
    return Rational(text);
  } catch (const std::exception&) {
    return fail();  // e.g. zero denominator
  }
}

long double to_long_double(const Rational& r) {
  return r.convert_to<long double>();
}

}  // namespace nmk
