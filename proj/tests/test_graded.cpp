#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "nmk/errors.hpp"
#include "nmk/graded.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

using nmk::ErrCode;
using nmk::Error;
using nmk::GradedElement;
using nmk::Lattice;

namespace {

std::complex<double> rand_coeff(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {u(rng), u(rng)};
}

// Random element with modes on the requested lattice, |n| <= bw.
GradedElement random_element(std::mt19937& rng, Lattice lat, int bw, int max_modes) {
  GradedElement v(lat);
  std::uniform_int_distribution<int> idx(-bw, bw);
  for (int i = 0; i < max_modes; ++i) {
    int n2 = 2 * idx(rng);
    if (lat == Lattice::half_integer) n2 += 1;  // odd doubled index
    v.set(n2, rand_coeff(rng));
  }
  return v;
}

}  // namespace

TEST_CASE("norm: constant, single mode, zero") {
  auto one = GradedElement::constant(1.0);
  CHECK(one.norm(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(one.norm(7.5) == doctest::Approx(1.0).epsilon(1e-15));

  auto v = GradedElement::single(Lattice::integer, 6, {2.0, 0.0});  // 2 e^{3it}
  CHECK(v.norm(2.0) == doctest::Approx(32.0).epsilon(1e-15));       // 2 * (1+3)^2

  auto z = GradedElement::zero(Lattice::half_integer);
  CHECK(z.norm(3.0) == 0.0);
  CHECK(z.empty());
}

TEST_CASE("norm: monotone in the order and rejects bad orders") {
  std::mt19937 rng(20240611u);
  for (int trial = 0; trial < 50; ++trial) {
    auto v = random_element(rng, trial % 2 ? Lattice::half_integer : Lattice::integer, 10, 8);
    double s = 5.0 * std::generate_canonical<double, 53>(rng);
    double t = s + 3.0 * std::generate_canonical<double, 53>(rng);
    CHECK(v.norm(s) <= v.norm(t) * (1.0 + 1e-14));
  }
  auto v = GradedElement::constant(1.0);
  CHECK_THROWS_AS(v.norm(-1.0), Error);
}

TEST_CASE("half-integer modes carry half-integer weights") {
  auto v = GradedElement::single(Lattice::half_integer, 3, {1.0, 0.0});  // e^{3it/2}
  CHECK(v.norm(1.0) == doctest::Approx(2.5).epsilon(1e-15));     // (1 + 3/2)
  CHECK(v.norm(2.0) == doctest::Approx(6.25).epsilon(1e-15));
}

TEST_CASE("set enforces the lattice parity") {
  GradedElement v(Lattice::integer);
  CHECK_THROWS_AS(v.set(3, {1.0, 0.0}), Error);
  try {
    v.set(3, {1.0, 0.0});
  } catch (const Error& e) {
    CHECK(e.code() == ErrCode::invalid_parameter);
  }
  GradedElement h(Lattice::half_integer);
  CHECK_THROWS_AS(h.set(2, {1.0, 0.0}), Error);
  h.set(-5, {0.25, 0.0});
  CHECK(h.mode_count() == 1);
}

TEST_CASE("add and scale behave linearly and drop cancelled modes") {
  auto a = GradedElement::single(Lattice::integer, 2, {1.0, 0.5});
  auto b = GradedElement::single(Lattice::integer, 2, {-1.0, -0.5});
  auto sum = nmk::add(a, b);
  CHECK(sum.empty());

  auto two_a = nmk::scale(a, 2.0);
  CHECK(two_a.at(2) == std::complex<double>(2.0, 1.0));
  CHECK(nmk::scale(a, 0.0).empty());

  auto mixed = nmk::add(a, GradedElement::constant(3.0));
  CHECK(mixed.mode_count() == 2);
  CHECK(mixed.at(0) == std::complex<double>(3.0, 0.0));

  auto h = GradedElement::single(Lattice::half_integer, 1, {1.0, 0.0});
  CHECK_THROWS_AS(nmk::add(a, h), Error);
  try {
    nmk::add(a, h);
  } catch (const Error& e) {
    CHECK(e.code() == ErrCode::invalid_operands);
  }
}

TEST_CASE("pointwise product: frequency addition and lattice rules") {
  // e^{it} * e^{2it} = e^{3it}
  auto p = nmk::pointwise_mul(GradedElement::single(Lattice::integer, 2, {1.0, 0.0}),
                              GradedElement::single(Lattice::integer, 4, {1.0, 0.0}));
  CHECK(p.lattice() == Lattice::integer);
  CHECK(p.mode_count() == 1);
  CHECK(p.at(6) == std::complex<double>(1.0, 0.0));

  // e^{it/2} * e^{it/2} = e^{it}: half x half -> integer
  auto q = nmk::pointwise_mul(GradedElement::single(Lattice::half_integer, 1, {1.0, 0.0}),
                              GradedElement::single(Lattice::half_integer, 1, {1.0, 0.0}));
  CHECK(q.lattice() == Lattice::integer);
  CHECK(q.at(2) == std::complex<double>(1.0, 0.0));

  // integer x half -> half
  auto r = nmk::pointwise_mul(GradedElement::constant(2.0),
                              GradedElement::single(Lattice::half_integer, 3, {1.0, 0.0}));
  CHECK(r.lattice() == Lattice::half_integer);
  CHECK(r.at(3) == std::complex<double>(2.0, 0.0));

  // (1 + e^{it})^2 = 1 + 2 e^{it} + e^{2it}
  GradedElement s(Lattice::integer);
  s.set(0, {1.0, 0.0});
  s.set(2, {1.0, 0.0});
  auto sq = nmk::pointwise_mul(s, s);
  CHECK(sq.at(0) == std::complex<double>(1.0, 0.0));
  CHECK(sq.at(2) == std::complex<double>(2.0, 0.0));
  CHECK(sq.at(4) == std::complex<double>(1.0, 0.0));
}

TEST_CASE("algebra bound |uv|_s <= |u|_s |v|_s on random pairs") {
  std::mt19937 rng(775031u);
  for (int trial = 0; trial < 100; ++trial) {
    Lattice la = trial % 3 ? Lattice::integer : Lattice::half_integer;
    Lattice lb = trial % 2 ? Lattice::integer : Lattice::half_integer;
    auto u = random_element(rng, la, 8, 6);
    auto v = random_element(rng, lb, 8, 6);
    double s = 4.0 * std::generate_canonical<double, 53>(rng);
    auto uv = nmk::pointwise_mul(u, v);
    CHECK(uv.norm(s) <= u.norm(s) * v.norm(s) * (1.0 + 1e-12));
  }
}

TEST_CASE("evaluation matches the mode sum") {
  GradedElement v(Lattice::half_integer);
  v.set(1, {1.0, 0.0});
  v.set(-1, {1.0, 0.0});
  // e^{it/2} + e^{-it/2} = 2 cos(t/2)
  const double t = 0.7318;
  CHECK(v.eval(t).real() == doctest::Approx(2.0 * std::cos(t / 2.0)).epsilon(1e-14));
  CHECK(v.eval(t).imag() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(v.is_real(1e-12));

  auto grid = nmk::sample_grid(v, 8);
  CHECK(grid.size() == 8);
  // Grid spans the 4-pi double cover, so j=2 sits at t = pi.
  CHECK(grid[2].real() == doctest::Approx(2.0 * std::cos(3.14159265358979323846 / 2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(nmk::sample_grid(v, 0), Error);
}

TEST_CASE("smoothing: sharp cutoff keeps |n| <= theta with constant exactly one") {
  // Bandwidth 3 survives theta = 10 untouched.
  GradedElement v(Lattice::integer);
  v.set(6, {1.0, 0.0});
  v.set(0, {2.0, 0.0});
  auto kept = nmk::smooth(v, 10.0);
  CHECK(kept == v);

  // theta = 1.5 keeps only the constant mode: 1+|2| = 3 > 1.5.
  GradedElement w(Lattice::integer);
  w.set(0, {1.0, 0.0});
  w.set(4, {5.0, 0.0});
  auto cut = nmk::smooth(w, 1.5);
  CHECK(cut.mode_count() == 1);
  CHECK(cut.at(0) == std::complex<double>(1.0, 0.0));

  CHECK_THROWS_AS(nmk::smooth(v, 1.0), Error);
  CHECK_THROWS_AS(nmk::smooth_log(v, 0.0), Error);
}

TEST_CASE("smoothing inequalities hold with constant exactly one") {
  // 200 random elements x 20 random (s, t, theta): the direct bound
  // |S_theta v|_t <= theta^{t-s} |v|_s (t >= s) and the remainder bound
  // |v - S_theta v|_s <= theta^{-(t-s)} |v|_t.
  std::mt19937 rng(424242u);
  std::uniform_real_distribution<double> ord(0.0, 6.0);
  std::uniform_real_distribution<double> th(1.0 + 1e-9, 40.0);
  int checked = 0;
  for (int e = 0; e < 200; ++e) {
    auto v = random_element(rng, e % 2 ? Lattice::half_integer : Lattice::integer, 16, 10);
    for (int trial = 0; trial < 20; ++trial) {
      double s = ord(rng), t = ord(rng);
      if (t < s) std::swap(t, s);
      double theta = th(rng);
      auto sm = nmk::smooth(v, theta);
      auto rem = nmk::add(v, nmk::scale(sm, -1.0));
      CHECK(sm.norm(t) <= std::pow(theta, t - s) * v.norm(s) * (1.0 + 1e-12));
      CHECK(rem.norm(s) <= std::pow(theta, -(t - s)) * v.norm(t) * (1.0 + 1e-12));
      ++checked;
    }
  }
  CHECK(checked == 4000);
}

TEST_CASE("smoothing is idempotent and tends to the identity") {
  std::mt19937 rng(90210u);
  auto v = random_element(rng, Lattice::integer, 12, 9);
  auto once = nmk::smooth(v, 7.0);
  CHECK(nmk::smooth(once, 7.0) == once);
  CHECK(nmk::smooth(v, 1e9) == v);

  // log-scale entry point agrees with the direct one
  CHECK(nmk::smooth_log(v, std::log(7.0)) == once);
}

TEST_CASE("smoothing family defaults certify constant one") {
  nmk::SmoothingFamily fam;
  CHECK(fam.chat(5.0, 2.0) == 1.0);
  CHECK(fam.log_chat(5.0, 2.0) == 0.0);
}

TEST_CASE("reciprocal of a constant") {
  auto two = GradedElement::constant(2.0);
  auto rec = nmk::reciprocal(two, 8, 1e-13);
  CHECK(rec.min_modulus == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(rec.value.at(0).real() == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(rec.value.at(0).imag() == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(rec.aliasing_residual < 1e-12);
  // Cancellation noise in the other projected modes is thresholded away, so
  // high-order norms of the reciprocal stay finite and honest.
  CHECK(rec.value.mode_count() == 1);
  CHECK(rec.value.norm(83.0) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("reciprocal of 2 + cos t at bandwidth 64") {
  GradedElement u(Lattice::integer);
  u.set(0, {2.0, 0.0});
  u.set(2, {0.5, 0.0});
  u.set(-2, {0.5, 0.0});
  auto rec = nmk::reciprocal(u, 64, 1e-13);
  CHECK(rec.min_modulus == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rec.aliasing_residual < 1e-10);
  // 1/(2+cos t) at t=0 is 1/3.
  CHECK(rec.value.eval(0.0).real() == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  CHECK(rec.value.is_real(1e-10));
}

TEST_CASE("reciprocal respects the C0 lower bound") {
  // |1/u|_{C0} = 1/min|u|: for the constant s, the reciprocal is 1/s.
  auto v = GradedElement::constant(0.125);
  auto rec = nmk::reciprocal(v, 4, 1e-13);
  CHECK(nmk::c0_norm(rec.value, 64) == doctest::Approx(8.0).epsilon(1e-12));

  auto vanishing = GradedElement::single(Lattice::integer, 2, {1.0, 0.0});
  // |e^{it}| = 1 everywhere, fine; but 1 + e^{it} vanishes at t = pi.
  GradedElement bad(Lattice::integer);
  bad.set(0, {1.0, 0.0});
  bad.set(2, {1.0, 0.0});
  CHECK_THROWS_AS(nmk::reciprocal(bad, 8, 1e-3), Error);
  try {
    nmk::reciprocal(bad, 8, 1e-3);
  } catch (const Error& e) {
    CHECK(e.code() == ErrCode::near_singular_inverse);
  }
  (void)vanishing;
}

TEST_CASE("json round trip is exact") {
  std::mt19937 rng(1337u);
  for (int trial = 0; trial < 20; ++trial) {
    auto v = random_element(rng, trial % 2 ? Lattice::half_integer : Lattice::integer, 9, 7);
    auto j = nmk::to_json(v);
    auto back = nmk::graded_from_json(j);
    CHECK(back == v);
    CHECK(back.lattice() == v.lattice());
  }
}

TEST_CASE("json rejects malformed input") {
  CHECK_THROWS_AS(nmk::graded_from_json("not json at all"), Error);
  CHECK_THROWS_AS(nmk::graded_from_json(R"({"type":"other"})"), Error);
  CHECK_THROWS_AS(nmk::graded_from_json(
                      R"({"type":"graded-element","version":1,"lattice":"integer"})"),
                  Error);
  CHECK_THROWS_AS(nmk::graded_from_json(
                      R"({"type":"graded-element","version":1,"lattice":"integer",
                          "modes":[[1,2,1.0,0.0]]})"),
                  Error);  // half mode on an integer lattice
  const std::string dup =
      R"({"type":"graded-element","version":1,"lattice":"integer",
          "modes":[[1,1,1.0,0.0],[1,1,2.0,0.0]]})";
  CHECK_THROWS_AS(nmk::graded_from_json(dup), Error);
  try {
    nmk::graded_from_json(dup);
  } catch (const Error& e) {
    CHECK(e.code() == ErrCode::invalid_operands);
  }
}
