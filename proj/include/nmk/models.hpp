#pragma once

#include <complex>
#include <string>
#include <vector>

#include "nmk/iteration.hpp"
#include "nmk/problem.hpp"

namespace nmk {

/// Vanishing order of the residual source term, m(d) = 8(16d^2+41d+26)
/// = 8(T+2).  At this order the launch hypothesis |phi(u0)|_{2d} <= theta0^-4
/// becomes scale-independent to leading order: theta0 grows like s^{-2(T+2)},
/// so s^m exactly cancels theta0^-4 and only the coefficient norms decide.
int residual_order(int d);

/// Coefficient data of the degenerate multiplication problem on the circle:
///   phi_s(u) = s^m a + (3/2) b_s u + (3/4) c u^2,   b_s = b0 + s*btilde,
/// acting on integer-lattice elements.  The linearization is multiplication
/// by (3/2) B_s(u) with B_s(u) = b_s + c u; degeneracy enters through zeros
/// of b0 that the s*btilde term lifts to size ~s.
struct ModelConfig {
  int d = 1;               ///< loss-of-derivatives order
  double s = 1.0;          ///< degeneracy scale, in (0, 1]
  int m = residual_order(1);
  double kappa = 0.0;      ///< quadratic-error coupling E(u)(w,v) = kappa w v
  double delta_base = 1.0; ///< tame ball radius is the strengthened s*delta_base

  GradedElement a;         ///< residual source profile
  GradedElement b0;        ///< degenerate part of the linearization
  GradedElement btilde;    ///< regularizing part, enters as s*btilde
  GradedElement c;         ///< quadratic coefficient

  int inverse_bandwidth = 16;      ///< projection bandwidth for 1/B_s(u)
  double min_modulus_floor = 1e-13;  ///< reciprocal guard inside psi
};

/// Multiplication-operator realization of a tame problem: all four maps act
/// by pointwise products with the coefficient profiles, and psi inverts the
/// linearization through the guarded reciprocal.  The defining identity
///   dphi(u) psi(u) v = v + E(u)(phi(u), v)
/// holds exactly (up to the reciprocal's aliasing residual) with
///   psi(u) v = (2/3) B_s(u)^{-1} (v + kappa phi(u) v),  E(u)(w,v) = kappa w v.
class MultiplicationModel final : public TameProblem {
public:
  MultiplicationModel(ModelConfig config, TameConstants constants);

  GradedElement phi(const GradedElement& u) const override;
  GradedElement dphi(const GradedElement& u, const GradedElement& w) const override;
  GradedElement psi(const GradedElement& u, const GradedElement& v) const override;
  GradedElement quad_error(const GradedElement& u, const GradedElement& w,
                           const GradedElement& v) const override;
  const TameConstants& constants() const override { return constants_; }

  const ModelConfig& config() const { return config_; }
  /// B_s(u) = b0 + s*btilde + c u  (the profile psi inverts).
  GradedElement linearization_profile(const GradedElement& u) const;
  /// s^m (underflows gracefully to 0 when the true value is below double range).
  double source_scale() const;

private:
  ModelConfig config_;
  TameConstants constants_;
  GradedElement b_s_;  ///< b0 + s*btilde, fixed per model
};

/// Honest tame constants for a model whose four profiles are all constant,
/// derived from the closed-form bounds of scalar multiplication on the ball
/// |u| <= s*delta_base:
///   C_t   = s^m|a| + (3/2)|b_s| + (3/4)|c| delta        (t-independent)
///   C~_t  = (2/3)(1 + kappa C(1+delta)) / (|b_s| - |c| delta)
///   C1 = kappa,  C2 = (3/2)(|b_s| + |c| delta),  C~3 = (3/4)|c|,  Chat = 1.
/// Fails with invalid-parameter on non-constant profiles and with
/// near-singular-inverse when the ball reaches a zero of the linearization.
TameConstants certified_scalar_constants(const ModelConfig& config);

/// Declared a-priori constants of the degenerate family at scale s:
/// C_t = 2, C1 = 2, C2 = 1, C~_t = s^{-t-2}, C~3 = s^{-3d}/10, Chat = 1,
/// delta = s, base point u0 = 0.  The s-powers mirror how each inverse-side
/// bound degenerates with the scale; everything is handed to the ledger in
/// log space so no order or scale overflows.
TameConstants declared_degenerate_family(int d, double s);

/// Presets ----------------------------------------------------------------

/// Constant-profile configuration used by the end-to-end iteration runs:
/// a = 1, b0 = 0.8, btilde = 0.4, c = 0.5, kappa = 0.1, delta_base = 0.2,
/// s = 1/2, m = 24.  Small enough residual to satisfy the launch hypothesis
/// against its own certified constants, quadratic contraction thereafter.
ModelConfig iteration_demo();

/// b0 = 0, btilde = 1: the linearization profile at u = 0 is exactly s, so
/// the measured inverse bound is exactly 1/s at every scale.
ModelConfig fully_degenerate(double s);

/// b0 = 1 - cos t (vanishing at t = 0), btilde = i: |B_s(0)| has minimum
/// exactly s on the sampling grid, attained where b0 vanishes.
ModelConfig partially_degenerate(double s);

/// Closed-form root -------------------------------------------------------

struct OracleRoot {
  GradedElement u_star;      ///< constant root of phi
  std::complex<double> value;  ///< its scalar value
  double residual_norm;      ///< |phi(u_star)|_{2d} evaluated through the model
};

/// Quadratic-formula root for constant profiles, on the branch continuous in
/// c at c = 0:
///   u* = (b_s/c)(sqrt(1-x) - 1),   x = 4 c s^m a / (3 b_s^2),
/// evaluated as -x/(1+sqrt(1-x)) to survive |x| ~ 1e-200, and as the exact
/// limit -(2/3) s^m a / b_s when c = 0.  Fails with oracle-unavailable on
/// non-constant profiles or b_s = 0.
OracleRoot exact_solution_oracle(const MultiplicationModel& model);

/// Scale sweep ------------------------------------------------------------

struct SweepRow {
  double s = 0.0;
  double log_s = 0.0;
  int m = 0;
  int d = 0;
  double min_modulus = 0.0;    ///< min_j |B_s(0)(t_j)| on the sweep grid
  double binv_c0 = 0.0;        ///< measured inverse bound sup 1/|B_s(0)| = 1/min
  double log_binv_c0 = 0.0;
  double log_theta0 = 0.0;     ///< from the declared degenerate family at s
  std::string theta0_winner;   ///< which max-rule candidate set theta0
  double log_phi0_2d = 0.0;    ///< log |phi_s(0)|_{2d} = m log s + log|a|_{2d}, exact in logs
  bool hypothesis_ok = false;  ///< log |phi_s(0)|_{2d} <= -4 log theta0, decided in logs
  bool converged = false;
  int iterations = 0;
  double log_final_residual = 0.0;  ///< -inf when the measured residual is zero
  std::string termination;
  std::string note;            ///< nonempty when the row failed (excluded from slopes)
};

struct SweepResult {
  std::vector<SweepRow> rows;        ///< one per requested scale, input order
  double slope_log_theta0 = 0.0;     ///< d log theta0 / d log s (least squares)
  double slope_log_binv = 0.0;       ///< d log sup|B^-1| / d log s
};

/// For each scale: evaluate the declared-family ledger, measure the inverse
/// bound of B_s(0) on the grid, and run the iteration from u0 = 0, recording
/// the outcome.  Scales must be strictly decreasing inside (0,1).  Rows are
/// distributed over a bounded worker pool but stay in input order; per-row
/// failures are recorded in `note` (and excluded from the slope fits), never
/// thrown.  The hypothesis column is decided in log space, so it stays
/// meaningful when s^m underflows the doubles the iteration itself sees.
SweepResult degenerate_sweep(const ModelConfig& base, const std::vector<double>& scales,
                             const IterateOptions& run = {}, int grid_points = 256,
                             int threads = 4);

/// Delimited sweep table with the fixed header
///   s,m,d,B_inv_norm,theta0_log,phi0_norm_log,hypothesis_ok,converged,iterations,final_residual_log
/// and %.17g number formatting (byte-stable).
std::string sweep_to_csv(const SweepResult& sweep);

/// Launch threshold -------------------------------------------------------

/// Log launch deficit of the declared family at scale s:
///   D(s) = m(d) log s + log|a| + 4 log theta0(s).
/// The hypothesis |phi(0)|_{2d} <= theta0^-4 holds iff D(s) <= 0.  Since
/// log theta0 decays no faster than -2(T+2) log s and m = 8(T+2), D is
/// nondecreasing in s.
double launch_deficit(int d, double a_norm, double s);

struct ThresholdResult {
  double s1 = 0.0;         ///< bracket midpoint after bisection
  double deficit_lo = 0.0; ///< D at the final bracket's low end   (<= 0)
  double deficit_hi = 0.0; ///< D at the final bracket's high end  (> 0)
  int iterations = 0;
};

/// Bisect the monotone deficit for the largest admissible scale
/// s1 = sup{ s : D(s) <= 0 } within the bracket [s_lo, s_hi].  Requires
/// D(s_lo) <= 0 < D(s_hi) (invalid-parameter otherwise).
ThresholdResult threshold_scale(int d, double a_norm, double s_lo, double s_hi,
                                double tol = 1e-9);

}  // namespace nmk
