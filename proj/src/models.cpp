#include "nmk/models.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "nmk/numerics.hpp"

namespace nmk {

namespace {

constexpr double kTwoThirds = 2.0 / 3.0;

void require_scale(double s) {
  if (!std::isfinite(s) || !(s > 0.0) || s > 1.0)
    throw Error(ErrCode::invalid_parameter, "degeneracy scale s must lie in (0, 1]");
}

void require_periodic(const GradedElement& profile, const char* name) {
  if (profile.lattice() != Lattice::integer) {
    std::ostringstream msg;
    msg << "coefficient profile " << name << " must live on the integer lattice";
    throw Error(ErrCode::invalid_parameter, msg.str());
  }
}

/// Scalar value of a constant profile; fails with `code` otherwise.
std::complex<double> constant_value(const GradedElement& profile, const char* name,
                                    ErrCode code, const char* context) {
  if (profile.empty()) return {0.0, 0.0};
  if (profile.mode_count() == 1 && profile.modes().begin()->first == 0) return profile.at(0);
  std::ostringstream msg;
  msg << context << " (profile " << name << " is not constant)";
  throw Error(code, msg.str());
}

}  // namespace

int residual_order(int d) {
  if (d < 1) throw Error(ErrCode::invalid_parameter, "loss-of-derivatives order d must be >= 1");
  return 8 * (16 * d * d + 41 * d + 26);
}

MultiplicationModel::MultiplicationModel(ModelConfig config, TameConstants constants)
    : config_(std::move(config)), constants_(std::move(constants)) {
  if (config_.d < 1)
    throw Error(ErrCode::invalid_parameter, "loss-of-derivatives order d must be >= 1");
  require_scale(config_.s);
  if (config_.m < 1) throw Error(ErrCode::invalid_parameter, "vanishing order m must be >= 1");
  if (!std::isfinite(config_.kappa))
    throw Error(ErrCode::invalid_parameter, "quadratic-error coupling kappa must be finite");
  if (!(config_.delta_base > 0.0) || !std::isfinite(config_.delta_base))
    throw Error(ErrCode::invalid_parameter, "ball radius base delta_base must be positive");
  if (config_.inverse_bandwidth < 0)
    throw Error(ErrCode::invalid_parameter, "inverse bandwidth must be nonnegative");
  if (!(config_.min_modulus_floor > 0.0))
    throw Error(ErrCode::invalid_parameter, "reciprocal floor must be positive");
  require_periodic(config_.a, "a");
  require_periodic(config_.b0, "b0");
  require_periodic(config_.btilde, "btilde");
  require_periodic(config_.c, "c");
  b_s_ = add(config_.b0, scale(config_.btilde, config_.s));
}

double MultiplicationModel::source_scale() const {
  return std::pow(config_.s, static_cast<double>(config_.m));
}

GradedElement MultiplicationModel::phi(const GradedElement& u) const {
  GradedElement out = add(scale(config_.a, source_scale()),
                          scale(pointwise_mul(b_s_, u), 1.5));
  return add(out, scale(pointwise_mul(config_.c, pointwise_mul(u, u)), 0.75));
}

GradedElement MultiplicationModel::linearization_profile(const GradedElement& u) const {
  return add(b_s_, pointwise_mul(config_.c, u));
}

GradedElement MultiplicationModel::dphi(const GradedElement& u, const GradedElement& w) const {
  return scale(pointwise_mul(linearization_profile(u), w), 1.5);
}

GradedElement MultiplicationModel::psi(const GradedElement& u, const GradedElement& v) const {
  const Reciprocal inverse = reciprocal(linearization_profile(u), config_.inverse_bandwidth,
                                        config_.min_modulus_floor);
  const GradedElement corrected = add(v, scale(pointwise_mul(phi(u), v), config_.kappa));
  return scale(pointwise_mul(inverse.value, corrected), kTwoThirds);
}

GradedElement MultiplicationModel::quad_error(const GradedElement& /*u*/, const GradedElement& w,
                                              const GradedElement& v) const {
  return scale(pointwise_mul(w, v), config_.kappa);
}

TameConstants certified_scalar_constants(const ModelConfig& config) {
  if (config.d < 1)
    throw Error(ErrCode::invalid_parameter, "loss-of-derivatives order d must be >= 1");
  require_scale(config.s);
  constexpr const char* kContext = "certified constants require constant coefficient profiles";
  const double a_abs = std::abs(
      constant_value(config.a, "a", ErrCode::invalid_parameter, kContext));
  const std::complex<double> b0v =
      constant_value(config.b0, "b0", ErrCode::invalid_parameter, kContext);
  const std::complex<double> btv =
      constant_value(config.btilde, "btilde", ErrCode::invalid_parameter, kContext);
  const double c_abs = std::abs(
      constant_value(config.c, "c", ErrCode::invalid_parameter, kContext));

  const double delta = config.s * config.delta_base;
  const double b_abs = std::abs(b0v + config.s * btv);
  const double gap = b_abs - c_abs * delta;
  if (!(gap > 0.0)) {
    std::ostringstream msg;
    msg << "tame ball of radius " << delta << " reaches a zero of the linearization"
        << " (|b_s| = " << b_abs << ", |c| delta = " << c_abs * delta << ")";
    throw Error(ErrCode::near_singular_inverse, msg.str());
  }

  const double source = std::pow(config.s, static_cast<double>(config.m)) * a_abs;
  const double kappa_abs = std::abs(config.kappa);
  const double C = source + 1.5 * b_abs + 0.75 * c_abs * delta;
  const double Ctilde = kTwoThirds * (1.0 + kappa_abs * C * (1.0 + delta)) / gap;
  // Zero couplings are declared at a tiny positive value: an upper bound may
  // only grow, and the ledger rejects log(0).
  constexpr double kPositiveFloor = 1e-300;
  const double C1 = std::max(kappa_abs, kPositiveFloor);
  const double C2 = 1.5 * (b_abs + c_abs * delta);
  const double Ctilde3 = std::max(0.75 * c_abs, kPositiveFloor);
  return TameConstants::with_linear(config.d, delta, C, C1, C2, Ctilde, Ctilde3, 1.0);
}

TameConstants declared_degenerate_family(int d, double s) {
  if (d < 1) throw Error(ErrCode::invalid_parameter, "loss-of-derivatives order d must be >= 1");
  require_scale(s);
  const double log_s = std::log(s);
  TameConstants tc;
  tc.d = d;
  tc.delta = s;  // strengthened ball: radius shrinks with the scale
  tc.log_C = [](double) { return std::log(2.0); };
  tc.log_C1 = std::log(2.0);
  tc.log_C2 = 0.0;
  tc.log_Ctilde = [log_s](double t) { return -(t + 2.0) * log_s; };
  tc.log_Ctilde3 = -3.0 * d * log_s + std::log(0.1);
  tc.log_Chat = [](double, double) { return 0.0; };
  return tc;
}

ModelConfig iteration_demo() {
  ModelConfig cfg;
  cfg.d = 1;
  cfg.s = 0.5;
  cfg.m = 24;
  cfg.kappa = 0.1;
  cfg.delta_base = 0.2;
  cfg.a = GradedElement::constant(1.0);
  cfg.b0 = GradedElement::constant(0.8);
  cfg.btilde = GradedElement::constant(0.4);
  cfg.c = GradedElement::constant(0.5);
  cfg.inverse_bandwidth = 64;
  return cfg;
}

ModelConfig fully_degenerate(double s) {
  require_scale(s);
  ModelConfig cfg;
  cfg.d = 1;
  cfg.s = s;
  cfg.m = residual_order(1);
  cfg.a = GradedElement::constant(1.0);
  cfg.b0 = GradedElement::zero(Lattice::integer);
  cfg.btilde = GradedElement::constant(1.0);
  cfg.c = GradedElement::zero(Lattice::integer);
  return cfg;
}

ModelConfig partially_degenerate(double s) {
  require_scale(s);
  ModelConfig cfg;
  cfg.d = 1;
  cfg.s = s;
  cfg.m = residual_order(1);
  cfg.a = GradedElement::constant(1.0);
  // 1 - cos t: vanishes to second order at t = 0.
  cfg.b0 = GradedElement::constant(1.0);
  cfg.b0.set(2, -0.5);
  cfg.b0.set(-2, -0.5);
  cfg.btilde = GradedElement::constant(std::complex<double>(0.0, 1.0));
  cfg.c = GradedElement::zero(Lattice::integer);
  return cfg;
}

OracleRoot exact_solution_oracle(const MultiplicationModel& model) {
  const ModelConfig& cfg = model.config();
  constexpr const char* kContext = "closed-form root requires constant coefficient profiles";
  const std::complex<double> a =
      constant_value(cfg.a, "a", ErrCode::oracle_unavailable, kContext);
  const std::complex<double> b0v =
      constant_value(cfg.b0, "b0", ErrCode::oracle_unavailable, kContext);
  const std::complex<double> btv =
      constant_value(cfg.btilde, "btilde", ErrCode::oracle_unavailable, kContext);
  const std::complex<double> c =
      constant_value(cfg.c, "c", ErrCode::oracle_unavailable, kContext);

  const std::complex<double> b = b0v + cfg.s * btv;
  if (b == 0.0)
    throw Error(ErrCode::oracle_unavailable,
                "closed-form root requires a nonvanishing linearization at the base point");

  const std::complex<double> source = model.source_scale() * a;
  std::complex<double> u;
  if (c == 0.0) {
    u = -kTwoThirds * source / b;
  } else {
    const std::complex<double> x = 4.0 * c * source / (3.0 * b * b);
    // -x/(1+sqrt(1-x)) equals sqrt(1-x)-1 without cancellation at |x| ~ 1e-200;
    // the principal sqrt has Re >= 0, so the denominator never vanishes.
    u = (b / c) * (-x / (1.0 + std::sqrt(1.0 - x)));
  }

  OracleRoot root;
  root.value = u;
  root.u_star = GradedElement::constant(u);
  root.residual_norm = model.phi(root.u_star).norm(2.0 * cfg.d);
  return root;
}

namespace {

SweepRow sweep_one(const ModelConfig& base, double s, const IterateOptions& run,
                   int grid_points) {
  SweepRow row;
  row.s = s;
  row.log_s = std::log(s);
  row.m = base.m;
  row.d = base.d;

  const TameConstants declared = declared_degenerate_family(base.d, s);
  const ConstantsLedger ledger = compute_ledger(declared);
  row.log_theta0 = ledger.log_theta0;
  row.theta0_winner = ledger.breakdown.winner;

  const GradedElement B = add(base.b0, scale(base.btilde, s));
  double min_modulus = INFINITY;
  for (const std::complex<double>& value : sample_grid(B, grid_points))
    min_modulus = std::min(min_modulus, std::abs(value));
  row.min_modulus = min_modulus;
  if (min_modulus > 0.0) {
    row.binv_c0 = 1.0 / min_modulus;
    row.log_binv_c0 = -std::log(min_modulus);
  } else {
    row.binv_c0 = INFINITY;
    row.log_binv_c0 = INFINITY;
    row.note = "linearization vanishes on the sweep grid";
  }

  // |phi_s(0)|_{2d} = s^m |a|_{2d}: taken in logs so m log s past double
  // range still compares correctly against -4 log theta0.
  const double log_a = std::log(base.a.norm(2.0 * base.d));
  row.log_phi0_2d = base.m * row.log_s + log_a;
  row.hypothesis_ok = row.log_phi0_2d <= -4.0 * row.log_theta0;

  ModelConfig cfg = base;
  cfg.s = s;
  const MultiplicationModel model(cfg, declared);
  const IterationResult outcome =
      iterate(model, GradedElement::zero(Lattice::integer), ledger, run);
  row.converged = outcome.trace.termination == Termination::converged;
  row.iterations = static_cast<int>(outcome.trace.steps.size());
  row.log_final_residual = std::log(outcome.trace.final.res_2d);
  row.termination = to_string(outcome.trace.termination);
  return row;
}

}  // namespace

SweepResult degenerate_sweep(const ModelConfig& base, const std::vector<double>& scales,
                             const IterateOptions& run, int grid_points, int threads) {
  if (scales.size() < 2)
    throw Error(ErrCode::invalid_parameter, "sweep needs at least two scales to fit slopes");
  for (std::size_t i = 0; i < scales.size(); ++i) {
    const double s = scales[i];
    if (!std::isfinite(s) || !(s > 0.0) || !(s < 1.0))
      throw Error(ErrCode::invalid_parameter, "sweep scales must lie strictly inside (0, 1)");
    if (i > 0 && !(s < scales[i - 1]))
      throw Error(ErrCode::invalid_parameter, "sweep scales must be strictly decreasing");
  }
  if (grid_points < 2)
    throw Error(ErrCode::invalid_parameter, "sweep grid needs at least two points");
  if (threads < 1) throw Error(ErrCode::invalid_parameter, "worker count must be >= 1");

  SweepResult result;
  result.rows.resize(scales.size());

  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= scales.size()) return;
      try {
        result.rows[i] = sweep_one(base, scales[i], run, grid_points);
      } catch (const std::exception& e) {
        SweepRow failed;
        failed.s = scales[i];
        failed.log_s = std::log(scales[i]);
        failed.m = base.m;
        failed.d = base.d;
        failed.note = e.what();
        result.rows[i] = std::move(failed);
      }
    }
  };

  const std::size_t pool =
      std::min<std::size_t>(static_cast<std::size_t>(threads), scales.size());
  std::vector<std::thread> workers;
  workers.reserve(pool);
  for (std::size_t i = 0; i < pool; ++i) workers.emplace_back(worker);
  for (std::thread& w : workers) w.join();

  std::vector<double> xs, theta_ys, binv_ys;
  for (const SweepRow& row : result.rows) {
    if (!row.note.empty() || !std::isfinite(row.log_binv_c0)) continue;
    xs.push_back(row.log_s);
    theta_ys.push_back(row.log_theta0);
    binv_ys.push_back(row.log_binv_c0);
  }
  if (xs.size() >= 2) {
    result.slope_log_theta0 = least_squares_slope(xs, theta_ys);
    result.slope_log_binv = least_squares_slope(xs, binv_ys);
  } else {
    result.slope_log_theta0 = NAN;
    result.slope_log_binv = NAN;
  }
  return result;
}

std::string sweep_to_csv(const SweepResult& sweep) {
  const auto fmt = [](double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
  };
  std::string out =
      "s,m,d,B_inv_norm,theta0_log,phi0_norm_log,hypothesis_ok,converged,"
      "iterations,final_residual_log\n";
  for (const SweepRow& row : sweep.rows) {
    out += fmt(row.s);
    out += ',';
    out += std::to_string(row.m);
    out += ',';
    out += std::to_string(row.d);
    out += ',';
    out += fmt(row.binv_c0);
    out += ',';
    out += fmt(row.log_theta0);
    out += ',';
    out += fmt(row.log_phi0_2d);
    out += ',';
    out += row.hypothesis_ok ? '1' : '0';
    out += ',';
    out += row.converged ? '1' : '0';
    out += ',';
    out += std::to_string(row.iterations);
    out += ',';
    out += fmt(row.log_final_residual);
    out += '\n';
  }
  return out;
}

double launch_deficit(int d, double a_norm, double s) {
  if (!(a_norm > 0.0) || !std::isfinite(a_norm))
    throw Error(ErrCode::invalid_parameter, "source norm must be a positive finite real");
  require_scale(s);
  const ConstantsLedger ledger = compute_ledger(declared_degenerate_family(d, s));
  return residual_order(d) * std::log(s) + std::log(a_norm) + 4.0 * ledger.log_theta0;
}

ThresholdResult threshold_scale(int d, double a_norm, double s_lo, double s_hi, double tol) {
  require_scale(s_lo);
  require_scale(s_hi);
  if (!(s_lo < s_hi))
    throw Error(ErrCode::invalid_parameter, "threshold bracket must satisfy s_lo < s_hi");
  if (!(tol > 0.0) || !std::isfinite(tol))
    throw Error(ErrCode::invalid_parameter, "bisection tolerance must be positive");

  double lo = s_lo, hi = s_hi;
  double deficit_lo = launch_deficit(d, a_norm, lo);
  double deficit_hi = launch_deficit(d, a_norm, hi);
  if (!(deficit_lo <= 0.0) || !(deficit_hi > 0.0)) {
    std::ostringstream msg;
    msg << "bracket does not straddle the launch threshold: D(" << lo << ") = " << deficit_lo
        << ", D(" << hi << ") = " << deficit_hi;
    throw Error(ErrCode::invalid_parameter, msg.str());
  }

  ThresholdResult result;
  while (hi - lo > tol && result.iterations < 200) {
    const double mid = 0.5 * (lo + hi);
    const double deficit_mid = launch_deficit(d, a_norm, mid);
    if (deficit_mid <= 0.0) {
      lo = mid;
      deficit_lo = deficit_mid;
    } else {
      hi = mid;
      deficit_hi = deficit_mid;
    }
    ++result.iterations;
  }
  result.s1 = 0.5 * (lo + hi);
  result.deficit_lo = deficit_lo;
  result.deficit_hi = deficit_hi;
  return result;
}

}  // namespace nmk
