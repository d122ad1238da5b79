#include "nmk/phg.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>

namespace nmk {

namespace {

using GroupKey = std::pair<Rational, Rational>;  // (k1, k2)

bool term_key_less(const PhgTerm& a, const PhgTerm& b) {
  if (a.k1 != b.k1) return a.k1 < b.k1;
  if (a.k2 != b.k2) return a.k2 < b.k2;
  return a.q < b.q;
}

bool same_key(const PhgTerm& a, const PhgTerm& b) {
  return a.k1 == b.k1 && a.k2 == b.k2 && a.q == b.q;
}

}  // namespace

PhgSum::PhgSum(std::vector<PhgTerm> terms) : terms_(std::move(terms)) {
  for (const PhgTerm& term : terms_)
    if (term.q < 0)
      throw Error(ErrCode::invalid_parameter, "log power must be nonnegative");
  canonicalize();
}

PhgSum PhgSum::monomial(Rational k1, int q, Rational k2, TrigPoly profile) {
  PhgTerm term;
  term.k1 = std::move(k1);
  term.q = q;
  term.k2 = std::move(k2);
  term.profile = std::move(profile);
  return PhgSum({std::move(term)});
}

void PhgSum::canonicalize() {
  std::stable_sort(terms_.begin(), terms_.end(), term_key_less);
  std::vector<PhgTerm> merged;
  for (PhgTerm& term : terms_) {
    if (!merged.empty() && same_key(merged.back(), term)) {
      merged.back().profile = merged.back().profile + term.profile;
    } else {
      merged.push_back(std::move(term));
    }
  }
  terms_.clear();
  for (PhgTerm& term : merged)
    if (!term.profile.empty()) terms_.push_back(std::move(term));
}

PhgSum PhgSum::operator+(const PhgSum& other) const {
  std::vector<PhgTerm> all = terms_;
  all.insert(all.end(), other.terms_.begin(), other.terms_.end());
  return PhgSum(std::move(all));
}

PhgSum PhgSum::operator-(const PhgSum& other) const {
  return *this + other.scaled(RationalComplex(-1));
}

PhgSum PhgSum::scaled(const RationalComplex& s) const {
  std::vector<PhgTerm> out = terms_;
  for (PhgTerm& term : out) term.profile = term.profile.scaled(s);
  return PhgSum(std::move(out));
}

bool operator==(const PhgSum& a, const PhgSum& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    const PhgTerm& x = a.terms_[i];
    const PhgTerm& y = b.terms_[i];
    if (!same_key(x, y) || x.profile != y.profile) return false;
  }
  return true;
}

Rational min_radial_exponent(const PhgSum& u) {
  if (u.empty())
    throw Error(ErrCode::invalid_parameter, "the zero sum has no radial exponent");
  return u.terms().front().k1;  // canonical order: k1 ascending
}

PhgSum L0_apply(const PhgSum& u) {
  std::vector<PhgTerm> out;
  for (const PhgTerm& term : u.terms()) {
    const Rational d = term.k1 * term.k1 - term.k2 * term.k2;
    if (d != 0) {
      PhgTerm t = term;
      t.profile = term.profile.scaled(RationalComplex(d));
      out.push_back(std::move(t));
    }
    if (term.q >= 1) {
      PhgTerm t = term;
      t.q = term.q - 1;
      t.profile = term.profile.scaled(RationalComplex(2 * term.k1 * term.q));
      out.push_back(std::move(t));
    }
    if (term.q >= 2) {
      PhgTerm t = term;
      t.q = term.q - 2;
      t.profile = term.profile.scaled(
          RationalComplex(Rational(term.q) * Rational(term.q - 1)));
      out.push_back(std::move(t));
    }
  }
  return PhgSum(std::move(out));
}

PhgSum L0_solve(const PhgSum& f) {
  // Group by (k1, k2): L0 preserves the group and acts on the log degree.
  std::map<GroupKey, std::vector<TrigPoly>> groups;
  for (const PhgTerm& term : f.terms()) {
    std::vector<TrigPoly>& poly = groups[{term.k1, term.k2}];
    if (static_cast<int>(poly.size()) <= term.q) poly.resize(term.q + 1);
    poly[term.q] = poly[term.q] + term.profile;
  }

  std::vector<PhgTerm> out;
  for (auto& [key, p] : groups) {
    const Rational& k1 = key.first;
    const Rational& k2 = key.second;
    const Rational d = k1 * k1 - k2 * k2;
    const int deg = static_cast<int>(p.size()) - 1;

    std::vector<TrigPoly> q_poly;
    if (d != 0) {
      // Non-resonant: (k1^2 - k2^2) q_j + 2 k1 (j+1) q_{j+1}
      //               + (j+2)(j+1) q_{j+2} = p_j, solved top-down.
      q_poly.assign(deg + 1, TrigPoly());
      const RationalComplex inv_d{Rational(1) / d};
      for (int j = deg; j >= 0; --j) {
        TrigPoly rhs = p[j];
        if (j + 1 <= deg)
          rhs = rhs - q_poly[j + 1].scaled(RationalComplex(2 * k1 * Rational(j + 1)));
        if (j + 2 <= deg)
          rhs = rhs - q_poly[j + 2].scaled(RationalComplex(Rational(j + 2) * Rational(j + 1)));
        q_poly[j] = rhs.scaled(inv_d);
      }
    } else {
      if (k1 == 0) {
        bool nonzero = false;
        for (const TrigPoly& c : p) nonzero = nonzero || !c.empty();
        if (nonzero)
          throw Error(ErrCode::unsupported_resonance,
                      "no polyhomogeneous inverse at the doubly degenerate pair "
                      "k1 = k2 = 0");
        continue;
      }
      // Resonant: with R = Q', solve 2 k1 R + R' = P top-down, then integrate
      // with Q(0) = 0.  The log degree rises by one.
      std::vector<TrigPoly> r_poly(deg + 1);
      const RationalComplex inv_2k1{Rational(1) / (2 * k1)};
      for (int j = deg; j >= 0; --j) {
        TrigPoly rhs = p[j];
        if (j + 1 <= deg) rhs = rhs - r_poly[j + 1].scaled(RationalComplex(Rational(j + 1)));
        r_poly[j] = rhs.scaled(inv_2k1);
      }
      q_poly.assign(deg + 2, TrigPoly());
      for (int j = 0; j <= deg; ++j)
        q_poly[j + 1] = r_poly[j].scaled(RationalComplex(Rational(1, j + 1)));
    }

    for (int j = 0; j < static_cast<int>(q_poly.size()); ++j) {
      if (q_poly[j].empty()) continue;
      PhgTerm term;
      term.k1 = k1;
      term.q = j;
      term.k2 = k2;
      term.profile = q_poly[j];
      out.push_back(std::move(term));
    }
  }
  return PhgSum(std::move(out));
}

PhgSum R_apply(const PhgSum& u) {
  std::vector<PhgTerm> out;
  for (const PhgTerm& term : u.terms()) {
    PhgTerm t = term;
    t.k1 = term.k1 + 2;
    t.profile = term.profile.second_derivative();
    out.push_back(std::move(t));
  }
  return PhgSum(std::move(out));
}

EdgeExpansion edge_expansion(const TrigPoly& boundary_profile, int depth) {
  if (depth < 0) throw Error(ErrCode::invalid_parameter, "expansion depth must be >= 0");
  EdgeExpansion result;
  result.layers.push_back(
      PhgSum::monomial(Rational(3, 2), 0, Rational(3, 2), boundary_profile));
  for (int j = 0; j < depth; ++j)
    result.layers.push_back(
        L0_solve(R_apply(result.layers.back())).scaled(RationalComplex(-1)));
  result.sum = PhgSum::zero();
  for (const PhgSum& layer : result.layers) result.sum = result.sum + layer;
  result.residual = R_apply(result.layers.back());
  return result;
}

PhgSum partial_r(const PhgSum& u) {
  std::vector<PhgTerm> out;
  for (const PhgTerm& term : u.terms()) {
    PhgTerm main = term;
    main.k1 = term.k1 - 1;
    main.profile = term.profile.scaled(RationalComplex(term.k1));
    out.push_back(std::move(main));
    if (term.q >= 1) {
      PhgTerm chain = term;
      chain.k1 = term.k1 - 1;
      chain.q = term.q - 1;
      chain.profile = term.profile.scaled(RationalComplex(Rational(term.q)));
      out.push_back(std::move(chain));
    }
  }
  return PhgSum(std::move(out));
}

PhgSum partial_theta(const PhgSum& u) {
  std::vector<PhgTerm> out;
  for (const PhgTerm& term : u.terms()) {
    PhgTerm t = term;
    t.profile = term.profile.scaled(RationalComplex(Rational(0), term.k2));
    out.push_back(std::move(t));
  }
  return PhgSum(std::move(out));
}

PhgSum partial_t(const PhgSum& u) {
  std::vector<PhgTerm> out;
  for (const PhgTerm& term : u.terms()) {
    PhgTerm t = term;
    t.profile = term.profile.derivative();
    out.push_back(std::move(t));
  }
  return PhgSum(std::move(out));
}

PhgSum radial_primitive(const PhgSum& u) {
  std::vector<PhgTerm> out;
  for (const PhgTerm& term : u.terms()) {
    const Rational a1 = term.k1 + 1;
    if (!(a1 > 0)) {
      std::ostringstream msg;
      msg << "radial primitive diverges at exponent " << rational_to_string(term.k1);
      throw Error(ErrCode::divergent_primitive, msg.str());
    }
    // ∫_0^r s^a L^q ds = r^{a+1} Σ_j (-1)^j q!/(q-j)! (a+1)^{-(j+1)} L^{q-j}
    Rational falling(1);   // q!/(q-j)!
    Rational power(1);     // (a+1)^j
    Rational sign(1);
    for (int j = 0; j <= term.q; ++j) {
      power *= a1;
      PhgTerm t;
      t.k1 = a1 + term.k1 - term.k1;  // a + 1
      t.k1 = term.k1 + 1;
      t.q = term.q - j;
      t.k2 = term.k2;
      t.profile = term.profile.scaled(RationalComplex(sign * falling / power));
      out.push_back(std::move(t));
      falling *= Rational(term.q - j);
      sign = -sign;
    }
  }
  return PhgSum(std::move(out));
}

std::complex<long double> eval(const PhgSum& u, long double r, long double theta,
                               long double t) {
  if (!(r > 0.0L))
    throw Error(ErrCode::invalid_parameter, "numeric evaluation needs r > 0");
  std::complex<long double> acc(0.0L, 0.0L);
  const long double logr = std::log(r);
  for (const PhgTerm& term : u.terms()) {
    std::complex<long double> profile(0.0L, 0.0L);
    for (const auto& [n, c] : term.profile.modes()) {
      const std::complex<long double> coeff(to_long_double(c.re), to_long_double(c.im));
      profile += coeff * std::polar<long double>(1.0L, n * t);
    }
    const long double radial =
        std::pow(r, to_long_double(term.k1)) * std::pow(logr, term.q);
    const std::complex<long double> phase =
        std::polar<long double>(1.0L, to_long_double(term.k2) * theta);
    acc += profile * radial * phase;
  }
  return acc;
}

namespace {

std::string exponent_braces(const Rational& k) {
  return "^{" + rational_to_string(k) + "}";
}

std::string theta_phase_string(const Rational& k2) {
  const auto num = boost::multiprecision::numerator(k2);
  const auto den = boost::multiprecision::denominator(k2);
  std::string inner;
  if (num == 1)
    inner = "iθ";
  else if (num == -1)
    inner = "-iθ";
  else
    inner = num.str() + "iθ";
  if (den != 1) inner += "/" + den.str();
  return "e^{" + inner + "}";
}

std::string term_pretty(const PhgTerm& term) {
  std::vector<std::string> factors;
  std::string profile = to_pretty_string(term.profile);
  if (profile != "1") {
    if (profile.find(" + ") != std::string::npos) profile = "(" + profile + ")";
    factors.push_back(profile);
  }
  if (term.k1 != 0)
    factors.push_back(term.k1 == 1 ? "r" : "r" + exponent_braces(term.k1));
  if (term.q == 1)
    factors.push_back("log r");
  else if (term.q > 1)
    factors.push_back("(log r)^{" + std::to_string(term.q) + "}");
  if (term.k2 != 0) factors.push_back(theta_phase_string(term.k2));
  if (factors.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (i > 0) out += "·";
    out += factors[i];
  }
  return out;
}

}  // namespace

std::string to_pretty_string(const PhgSum& u) {
  if (u.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < u.terms().size(); ++i) {
    if (i > 0) out += " + ";
    out += term_pretty(u.terms()[i]);
  }
  return out;
}

std::string phg_to_json(const PhgSum& u) {
  nlohmann::json root;
  root["type"] = "phg-sum";
  root["version"] = 1;
  nlohmann::json terms = nlohmann::json::array();
  for (const PhgTerm& term : u.terms()) {
    nlohmann::json jt;
    jt["k1"] = rational_to_string(term.k1);
    jt["q"] = term.q;
    jt["k2"] = rational_to_string(term.k2);
    nlohmann::json profile = nlohmann::json::array();
    for (const auto& [n, c] : term.profile.modes())
      profile.push_back({n, rational_to_string(c.re), rational_to_string(c.im)});
    jt["profile"] = std::move(profile);
    terms.push_back(std::move(jt));
  }
  root["terms"] = std::move(terms);
  return root.dump();
}

PhgSum phg_from_json(const std::string& text) {
  const auto fail = [](const char* what) -> PhgSum {
    throw Error(ErrCode::invalid_operands,
                std::string("malformed polyhomogeneous-sum record: ") + what);
  };
  nlohmann::json root = nlohmann::json::parse(text, nullptr, false);
  if (root.is_discarded()) return fail("not valid JSON");
  if (!root.is_object() || root.value("type", "") != "phg-sum" ||
      root.value("version", 0) != 1)
    return fail("wrong type or version");
  if (!root.contains("terms") || !root["terms"].is_array()) return fail("missing terms");

  std::vector<PhgTerm> terms;
  for (const auto& jt : root["terms"]) {
    if (!jt.is_object() || !jt.contains("k1") || !jt.contains("q") || !jt.contains("k2") ||
        !jt.contains("profile"))
      return fail("incomplete term");
    if (!jt["k1"].is_string() || !jt["k2"].is_string() ||
        !jt["q"].is_number_integer() || !jt["profile"].is_array())
      return fail("wrongly typed term");
    PhgTerm term;
    term.k1 = rational_from_string(jt["k1"].get<std::string>());
    term.k2 = rational_from_string(jt["k2"].get<std::string>());
    term.q = jt["q"].get<int>();
    if (term.q < 0) return fail("negative log power");
    for (const auto& mode : jt["profile"]) {
      if (!mode.is_array() || mode.size() != 3 || !mode[0].is_number_integer() ||
          !mode[1].is_string() || !mode[2].is_string())
        return fail("malformed profile mode");
      const int n = mode[0].get<int>();
      if (!term.profile.at(n).is_zero()) return fail("duplicate profile mode");
      term.profile.set(n, RationalComplex(rational_from_string(mode[1].get<std::string>()),
                                          rational_from_string(mode[2].get<std::string>())));
    }
    terms.push_back(std::move(term));
  }
  return PhgSum(std::move(terms));
}

}  // namespace nmk
