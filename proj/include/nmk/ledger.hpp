#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "nmk/errors.hpp"

namespace nmk {

/// Regularity orders derived from the loss-of-derivatives order d:
///   N = 4(2d+1),  T = 3d+3+(2d+3)(N+3),  tau = 3d+d(N+3).
struct Orders {
  int N;
  int T;
  int tau;
};

Orders derived_orders(int d);

/// Closed forms of the same orders: T = 16d^2+41d+24, tau = 8d^2+10d.
int T_closed_form(int d);
int tau_closed_form(int d);

/// Declared constants of a tame problem.  The scalar families are stored in
/// LOG space: the degenerate-scale regime evaluates them at orders past 80
/// with values like s^-83 at s = 2^-8 (~2^664), far beyond double range.
/// Linear convenience accessors/factories cover the desk-scale cases.
struct TameConstants {
  int d = 1;            ///< loss-of-derivatives order, >= 1
  double delta = 1.0;   ///< tame ball radius (linear scale)

  std::function<double(double)> log_C;       ///< t -> log C_t (direct tame bound)
  double log_C1 = 0.0;                       ///< first-derivative bound
  double log_C2 = 0.0;                       ///< second-derivative bound
  std::function<double(double)> log_Ctilde;  ///< t -> log C~_t (approximate inverse)
  double log_Ctilde3 = 0.0;                  ///< quadratic-error bound
  std::function<double(double, double)> log_Chat;  ///< (s,t) -> log Chat_{s,t} (smoothing)

  /// Base-point norms |u0|_order at the four orders the ledger consumes.
  double u0_2d = 0.0;
  double u0_3d = 0.0;
  double u0_Tp2d = 0.0;   ///< |u0|_{T+2d}
  double u0_taupd = 0.0;  ///< |u0|_{tau+d}

  /// Constant families given as plain linear values (all must be positive).
  static TameConstants with_linear(int d, double delta, double C, double C1, double C2,
                                   double Ctilde, double Ctilde3, double Chat = 1.0);
};

/// Which candidate achieved the theta0 max rule, with all candidates recorded
/// (log scale) for display.
struct Theta0Breakdown {
  double log_floor;  ///< log 2
  double log_U_T;
  double log_U_taumd;  ///< U_{tau-d}
  double log_ball;     ///< Chat_{3d,3d} V / delta
  double log_C0;
  std::string winner;
};

/// Fully evaluated constants ledger (log scale).  theta-schedule:
/// theta_{k+1} = theta_k^{5/4}, i.e. log theta_k = (5/4)^k log theta0.
struct ConstantsLedger {
  int d = 1;
  Orders orders{};
  double delta = 1.0;
  std::vector<int> tracked_t;  ///< {d, T, tau-d}: the orders the lemma checks use

  double log_V0 = 0.0;
  double log_V1 = 0.0;
  double log_V = 0.0;
  double log_C0 = 0.0;
  double log_theta0 = 0.0;
  std::map<int, double> log_Vt;  ///< script-V_t at tracked t
  std::map<int, double> log_Ut;  ///< U_t at tracked t
  Theta0Breakdown breakdown{};

  double theta0() const;  ///< exp(log_theta0); +inf past double range
  double Vt(int t) const;
  double Ut(int t) const;
  double V() const;
  double C0() const;
  double log_theta(int k) const;  ///< log theta_k under the 5/4-power schedule
};

/// Evaluate every ledger quantity from declared constants.  Missing or
/// non-finite family values fail with incomplete-constants.
ConstantsLedger compute_ledger(const TameConstants& constants);

/// theta_k list plus the summability certificate
/// sum_{j<=k_max} theta_j^-3 < theta0^-1 (all comparisons in log space).
struct ThetaSequence {
  double log_theta0;
  std::vector<double> log_theta;  ///< k = 0..k_max
  double log_partial_sum;         ///< log of sum theta_j^-3
  bool summability_ok;
  double theta(int k) const;  ///< exp; +inf past double range
};

/// Requires theta0 >= 2 (below-minimum-scale otherwise).
ThetaSequence theta_sequence(double theta0, int k_max);
ThetaSequence theta_sequence_log(double log_theta0, int k_max);

}  // namespace nmk
