#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "nmk/errors.hpp"
#include "nmk/models.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

using nmk::ErrCode;
using nmk::Error;
using nmk::GradedElement;
using nmk::Lattice;

namespace {

std::vector<double> dyadic_scales(int count) {
  std::vector<double> scales;
  for (int j = 1; j <= count; ++j) scales.push_back(std::pow(2.0, -j));
  return scales;
}

}  // namespace

TEST_CASE("residual vanishing order follows its closed form") {
  CHECK(nmk::residual_order(1) == 664);
  for (int d = 1; d <= 5; ++d) {
    auto orders = nmk::derived_orders(d);
    CHECK(nmk::residual_order(d) == 8 * (orders.T + 2));
  }
  CHECK_THROWS_AS(nmk::residual_order(0), Error);
}

TEST_CASE("certified constants for the demo preset") {
  auto tc = nmk::certified_scalar_constants(nmk::iteration_demo());
  CHECK(tc.d == 1);
  CHECK(tc.delta == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(std::exp(tc.log_C(5)) == doctest::Approx(1.5375000596046449).epsilon(1e-14));
  CHECK(std::exp(tc.log_Ctilde(7)) == doctest::Approx(0.8204386010922884).epsilon(1e-14));
  CHECK(std::exp(tc.log_C1) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(std::exp(tc.log_C2) == doctest::Approx(1.575).epsilon(1e-14));  // 1.5(|b|+|c|delta)
  CHECK(std::exp(tc.log_Ctilde3) == doctest::Approx(0.375).epsilon(1e-14));
  CHECK(tc.log_Chat(10.0, 3.0) == 0.0);

  auto ledger = nmk::compute_ledger(tc);
  CHECK(ledger.theta0() == doctest::Approx(35.5147369717234).epsilon(1e-12));
  CHECK(ledger.breakdown.winner == "Chat V/delta");
  CHECK(ledger.V() == doctest::Approx(3.5514736971723413).epsilon(1e-12));
  CHECK(ledger.C0() == doctest::Approx(15.3827).epsilon(1e-4));
  for (int t : ledger.tracked_t) {
    CHECK(ledger.Vt(t) == doctest::Approx(2.648991235970824).epsilon(1e-12));
    CHECK(ledger.Ut(t) == doctest::Approx(3.648991235970824).epsilon(1e-12));
  }
}

TEST_CASE("certified constants require constant profiles and a safe ball") {
  auto cfg = nmk::iteration_demo();
  cfg.b0.set(2, {0.25, 0.0});
  CHECK_THROWS_AS(nmk::certified_scalar_constants(cfg), Error);
  try {
    nmk::certified_scalar_constants(cfg);
  } catch (const Error& e) {
    CHECK(e.code() == ErrCode::invalid_parameter);
  }

  auto narrow = nmk::iteration_demo();
  narrow.b0 = GradedElement::constant(0.1);
  narrow.btilde = GradedElement::zero(Lattice::integer);
  narrow.c = GradedElement::constant(10.0);
  narrow.delta_base = 1.0;  // ball radius 0.5, but |c| delta = 5 >> |b| = 0.1
  CHECK_THROWS_AS(nmk::certified_scalar_constants(narrow), Error);
  try {
    nmk::certified_scalar_constants(narrow);
  } catch (const Error& e) {
    CHECK(e.code() == ErrCode::near_singular_inverse);
  }
}

TEST_CASE("model construction validates its configuration") {
  auto good = nmk::iteration_demo();
  auto tc = nmk::certified_scalar_constants(good);
  CHECK_NOTHROW(nmk::MultiplicationModel(good, tc));

  auto bad = good;
  bad.d = 0;
  CHECK_THROWS_AS(nmk::MultiplicationModel(bad, tc), Error);
  bad = good;
  bad.s = 1.5;
  CHECK_THROWS_AS(nmk::MultiplicationModel(bad, tc), Error);
  bad = good;
  bad.m = 0;
  CHECK_THROWS_AS(nmk::MultiplicationModel(bad, tc), Error);
  bad = good;
  bad.kappa = std::nan("");
  CHECK_THROWS_AS(nmk::MultiplicationModel(bad, tc), Error);
  bad = good;
  bad.delta_base = 0.0;
  CHECK_THROWS_AS(nmk::MultiplicationModel(bad, tc), Error);
  bad = good;
  bad.inverse_bandwidth = -1;
  CHECK_THROWS_AS(nmk::MultiplicationModel(bad, tc), Error);
  bad = good;
  bad.min_modulus_floor = 0.0;
  CHECK_THROWS_AS(nmk::MultiplicationModel(bad, tc), Error);
  bad = good;
  bad.a = GradedElement::single(Lattice::half_integer, 1, {1.0, 0.0});
  CHECK_THROWS_AS(nmk::MultiplicationModel(bad, tc), Error);
}

TEST_CASE("closed-form root of the demo model") {
  auto cfg = nmk::iteration_demo();
  nmk::MultiplicationModel model(cfg, nmk::certified_scalar_constants(cfg));
  auto root = nmk::exact_solution_oracle(model);
  CHECK(root.value.real() == doctest::Approx(-3.973643024500639e-08).epsilon(1e-12));
  CHECK(std::abs(root.value.imag()) < 1e-20);
  CHECK(root.residual_norm < 1e-20);
  CHECK(root.u_star.mode_count() == 1);
}

TEST_CASE("closed-form root: linear limit when the quadratic coupling vanishes") {
  nmk::ModelConfig cfg;
  cfg.d = 1;
  cfg.s = 1.0;
  cfg.m = 1;
  cfg.a = GradedElement::constant(0.3);
  cfg.b0 = GradedElement::constant(1.0);
  cfg.btilde = GradedElement::zero(Lattice::integer);
  cfg.c = GradedElement::zero(Lattice::integer);
  nmk::MultiplicationModel model(cfg, nmk::certified_scalar_constants(cfg));
  auto root = nmk::exact_solution_oracle(model);
  CHECK(root.value.real() == doctest::Approx(-0.2).epsilon(1e-14));
  CHECK(root.residual_norm < 1e-16);
}

TEST_CASE("closed-form root: residual vanishes for random admissible couplings") {
  std::mt19937 rng(5551212u);
  std::uniform_real_distribution<double> mag(0.2, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    nmk::ModelConfig cfg;
    cfg.d = 1;
    cfg.s = 0.5;
    cfg.m = 2;
    cfg.kappa = 0.0;
    cfg.a = GradedElement::constant({mag(rng), mag(rng)});
    cfg.b0 = GradedElement::constant({mag(rng), 0.0});
    cfg.btilde = GradedElement::constant({0.0, mag(rng)});
    cfg.c = GradedElement::constant({mag(rng), mag(rng)});
    nmk::MultiplicationModel model(cfg, nmk::declared_degenerate_family(1, cfg.s));
    auto root = nmk::exact_solution_oracle(model);
    const double source = model.source_scale() * std::abs(cfg.a.at(0));
    CHECK(root.residual_norm <= 1e-12 * (1.0 + source));
  }
}

TEST_CASE("closed-form root is unavailable off the constant-coefficient family") {
  auto varying = nmk::partially_degenerate(0.5);
  nmk::MultiplicationModel model(varying, nmk::declared_degenerate_family(1, 0.5));
  CHECK_THROWS_AS(nmk::exact_solution_oracle(model), Error);
  try {
    nmk::exact_solution_oracle(model);
  } catch (const Error& e) {
    CHECK(e.code() == ErrCode::oracle_unavailable);
  }

  nmk::ModelConfig flat;
  flat.d = 1;
  flat.s = 0.5;
  flat.m = 2;
  flat.a = GradedElement::constant(1.0);
  flat.b0 = GradedElement::zero(Lattice::integer);
  flat.btilde = GradedElement::zero(Lattice::integer);
  flat.c = GradedElement::constant(1.0);
  nmk::MultiplicationModel degenerate(flat, nmk::declared_degenerate_family(1, 0.5));
  CHECK_THROWS_AS(nmk::exact_solution_oracle(degenerate), Error);
  try {
    nmk::exact_solution_oracle(degenerate);
  } catch (const Error& e) {
    CHECK(e.code() == ErrCode::oracle_unavailable);
  }
}

TEST_CASE("declared degenerate family scales as documented") {
  auto tc = nmk::declared_degenerate_family(1, 0.25);
  CHECK(tc.delta == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(std::exp(tc.log_C(4)) == doctest::Approx(2.0).epsilon(1e-14));
  // Ctilde_t = s^{-(t+2)}: at t = 2, 0.25^-4 = 256.
  CHECK(std::exp(tc.log_Ctilde(2)) == doctest::Approx(256.0).epsilon(1e-12));
  // Ctilde3 = s^{-3d}/10 = 64/10.
  CHECK(std::exp(tc.log_Ctilde3) == doctest::Approx(6.4).epsilon(1e-12));
  CHECK_THROWS_AS(nmk::declared_degenerate_family(0, 0.5), Error);
  CHECK_THROWS_AS(nmk::declared_degenerate_family(1, 0.0), Error);
}

TEST_CASE("fully degenerate sweep: inverse norm slope is exactly minus one") {
  auto sweep = nmk::degenerate_sweep(nmk::fully_degenerate(0.5), dyadic_scales(8));
  REQUIRE(sweep.rows.size() == 8);
  for (const auto& row : sweep.rows) {
    CHECK(row.note.empty());
    CHECK(row.min_modulus == row.s);  // B = s exactly on the grid
    CHECK(row.converged);
    CHECK(row.theta0_winner == "C0");
  }
  CHECK(sweep.slope_log_binv == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(sweep.slope_log_theta0 == doctest::Approx(-165.92128507428535).epsilon(1e-10));
}

TEST_CASE("partially degenerate sweep: the minimum sits at the degenerate point") {
  auto sweep = nmk::degenerate_sweep(nmk::partially_degenerate(0.5), dyadic_scales(6));
  REQUIRE(sweep.rows.size() == 6);
  for (const auto& row : sweep.rows) {
    CHECK(row.note.empty());
    // |B(t)| = |1 - cos t + i s| attains its minimum s at t = 0.
    CHECK(row.min_modulus == doctest::Approx(row.s).epsilon(1e-14));
  }
  CHECK(sweep.slope_log_binv == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("sweep output is deterministic across thread counts and repeat runs") {
  auto base = nmk::fully_degenerate(0.5);
  auto scales = dyadic_scales(6);
  auto a = nmk::degenerate_sweep(base, scales, {}, 256, 4);
  auto b = nmk::degenerate_sweep(base, scales, {}, 256, 1);
  auto c = nmk::degenerate_sweep(base, scales, {}, 256, 4);
  CHECK(nmk::sweep_to_csv(a) == nmk::sweep_to_csv(b));
  CHECK(nmk::sweep_to_csv(a) == nmk::sweep_to_csv(c));
  CHECK(nmk::sweep_to_csv(a).rfind(
            "s,m,d,B_inv_norm,theta0_log,phi0_norm_log,hypothesis_ok,converged,"
            "iterations,final_residual_log\n",
            0) == 0);
}

TEST_CASE("sweep validates its inputs") {
  auto base = nmk::fully_degenerate(0.5);
  CHECK_THROWS_AS(nmk::degenerate_sweep(base, {0.5}), Error);
  CHECK_THROWS_AS(nmk::degenerate_sweep(base, {0.25, 0.5}), Error);  // not decreasing
  CHECK_THROWS_AS(nmk::degenerate_sweep(base, {1.0, 0.5}), Error);   // 1.0 excluded
  CHECK_THROWS_AS(nmk::degenerate_sweep(base, {0.5, 0.25}, {}, 1, 4), Error);
  CHECK_THROWS_AS(nmk::degenerate_sweep(base, {0.5, 0.25}, {}, 256, 0), Error);
}

TEST_CASE("sweep records per-row failures instead of throwing") {
  // A coefficient family whose linearization vanishes identically: every row
  // notes the vanishing grid minimum, and no slope can be fit.
  auto base = nmk::fully_degenerate(0.5);
  base.b0 = GradedElement::zero(Lattice::integer);
  base.btilde = GradedElement::zero(Lattice::integer);
  auto sweep = nmk::degenerate_sweep(base, dyadic_scales(3));
  for (const auto& row : sweep.rows) CHECK_FALSE(row.note.empty());
  CHECK(std::isnan(sweep.slope_log_binv));
  CHECK(std::isnan(sweep.slope_log_theta0));
}

TEST_CASE("launch threshold: bisection matches the frozen crossover") {
  auto result = nmk::threshold_scale(1, 2e-6, 0.4, 0.9, 1e-9);
  CHECK(result.s1 == doctest::Approx(0.5783463447354734).epsilon(1e-6));
  CHECK(result.iterations == 29);
  CHECK(result.deficit_lo <= 0.0);
  CHECK(result.deficit_hi > 0.0);

  CHECK(nmk::launch_deficit(1, 2e-6, 0.4) == doctest::Approx(-0.573436).epsilon(1e-4));
  CHECK(nmk::launch_deficit(1, 2e-6, 0.9) == doctest::Approx(0.941292).epsilon(1e-4));

  // Both bracket ends on the same side of the threshold: no crossover inside.
  CHECK_THROWS_AS(nmk::threshold_scale(1, 2e-6, 0.6, 0.9, 1e-9), Error);
  CHECK_THROWS_AS(nmk::threshold_scale(1, 2e-6, 0.9, 0.4, 1e-9), Error);
}

TEST_CASE("below the threshold the smallness comparison holds and the run converges") {
  const double s = 0.4;
  CHECK(nmk::launch_deficit(1, 2e-6, s) < 0.0);

  auto cfg = nmk::fully_degenerate(s);
  cfg.a = GradedElement::constant(2e-6);
  auto declared = nmk::declared_degenerate_family(1, s);
  nmk::MultiplicationModel model(cfg, declared);
  auto ledger = nmk::compute_ledger(declared);

  // The initial residual is tiny but still representable: s^m |a| ~ 1e-270.
  const double res0 = model.phi(GradedElement::zero(Lattice::integer)).norm(2.0);
  CHECK(res0 > 0.0);
  CHECK(std::log(res0) == doctest::Approx(-621.5394093418432).epsilon(1e-10));
  CHECK(-4.0 * ledger.log_theta0 == doctest::Approx(-620.9659733077497).epsilon(1e-10));

  auto out = nmk::iterate(model, GradedElement::zero(Lattice::integer), ledger);
  CHECK_FALSE(out.trace.hypothesis_violated);
  CHECK(out.trace.termination == nmk::Termination::converged);
}

TEST_CASE("source scale underflows gracefully far below the threshold") {
  // At s = 2^-5 the source s^664 |a| is below the smallest double; the linear
  // residual flushes to zero while the log-space comparison stays exact.
  const double s = std::pow(2.0, -5);
  auto cfg = nmk::fully_degenerate(s);
  auto declared = nmk::declared_degenerate_family(1, s);
  nmk::MultiplicationModel model(cfg, declared);
  CHECK(model.source_scale() == 0.0);
  auto ledger = nmk::compute_ledger(declared);
  auto out = nmk::iterate(model, GradedElement::zero(Lattice::integer), ledger);
  CHECK(out.trace.termination == nmk::Termination::converged);
  CHECK(out.trace.steps.empty());
}
