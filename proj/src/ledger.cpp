#include "nmk/ledger.hpp"

#include <cmath>
#include <sstream>

#include "nmk/numerics.hpp"

namespace nmk {

namespace {

void require_d(int d) {
  if (d < 1) throw Error(ErrCode::invalid_parameter, "loss-of-derivatives order d must be >= 1");
}

/// Fetch one log-family value and insist it is a finite real (a declared
/// constant must be a positive finite number, so its log is finite).
double fetch(const std::function<double(double)>& family, double t, const char* name) {
  if (!family) {
    std::ostringstream msg;
    msg << "constant family " << name << " was not provided";
    throw Error(ErrCode::incomplete_constants, msg.str());
  }
  const double value = family(t);
  if (!std::isfinite(value)) {
    std::ostringstream msg;
    msg << name << "(" << t << ") is missing or not a positive finite constant";
    throw Error(ErrCode::incomplete_constants, msg.str());
  }
  return value;
}

double fetch2(const std::function<double(double, double)>& family, double s, double t,
              const char* name) {
  if (!family) {
    std::ostringstream msg;
    msg << "constant family " << name << " was not provided";
    throw Error(ErrCode::incomplete_constants, msg.str());
  }
  const double value = family(s, t);
  if (!std::isfinite(value)) {
    std::ostringstream msg;
    msg << name << "(" << s << "," << t << ") is missing or not a positive finite constant";
    throw Error(ErrCode::incomplete_constants, msg.str());
  }
  return value;
}

void require_scalar(double log_value, const char* name) {
  if (!std::isfinite(log_value)) {
    std::ostringstream msg;
    msg << name << " must be a positive finite constant";
    throw Error(ErrCode::incomplete_constants, msg.str());
  }
}

}  // namespace

Orders derived_orders(int d) {
  require_d(d);
  const int N = 4 * (2 * d + 1);
  const int T = 3 * d + 3 + (2 * d + 3) * (N + 3);
  const int tau = 3 * d + d * (N + 3);
  return Orders{N, T, tau};
}

int T_closed_form(int d) {
  require_d(d);
  return 16 * d * d + 41 * d + 24;
}

int tau_closed_form(int d) {
  require_d(d);
  return 8 * d * d + 10 * d;
}

TameConstants TameConstants::with_linear(int d, double delta, double C, double C1, double C2,
                                         double Ctilde, double Ctilde3, double Chat) {
  require_d(d);
  for (double value : {delta, C, C1, C2, Ctilde, Ctilde3, Chat})
    if (!(value > 0.0) || !std::isfinite(value))
      throw Error(ErrCode::invalid_parameter, "declared constants must be positive finite reals");
  TameConstants tc;
  tc.d = d;
  tc.delta = delta;
  const double log_C = std::log(C), log_Ct = std::log(Ctilde), log_Ch = std::log(Chat);
  tc.log_C = [log_C](double) { return log_C; };
  tc.log_Ctilde = [log_Ct](double) { return log_Ct; };
  tc.log_Chat = [log_Ch](double, double) { return log_Ch; };
  tc.log_C1 = std::log(C1);
  tc.log_C2 = std::log(C2);
  tc.log_Ctilde3 = std::log(Ctilde3);
  return tc;
}

double ConstantsLedger::theta0() const { return std::exp(log_theta0); }
double ConstantsLedger::V() const { return std::exp(log_V); }
double ConstantsLedger::C0() const { return std::exp(log_C0); }

double ConstantsLedger::Vt(int t) const {
  auto it = log_Vt.find(t);
  if (it == log_Vt.end())
    throw Error(ErrCode::invalid_parameter, "script-V requested at an untracked order");
  return std::exp(it->second);
}

double ConstantsLedger::Ut(int t) const {
  auto it = log_Ut.find(t);
  if (it == log_Ut.end())
    throw Error(ErrCode::invalid_parameter, "U requested at an untracked order");
  return std::exp(it->second);
}

double ConstantsLedger::log_theta(int k) const {
  if (k < 0) throw Error(ErrCode::invalid_parameter, "theta index must be nonnegative");
  return std::pow(1.25, k) * log_theta0;
}

ConstantsLedger compute_ledger(const TameConstants& tc) {
  require_d(tc.d);
  if (!(tc.delta > 0.0) || !std::isfinite(tc.delta))
    throw Error(ErrCode::invalid_parameter, "tame ball radius delta must be positive");
  for (double u0 : {tc.u0_2d, tc.u0_3d, tc.u0_Tp2d, tc.u0_taupd})
    if (u0 < 0.0 || !std::isfinite(u0))
      throw Error(ErrCode::invalid_parameter, "base-point norms must be finite and nonnegative");
  require_scalar(tc.log_C1, "C1");
  require_scalar(tc.log_C2, "C2");
  require_scalar(tc.log_Ctilde3, "C~3");

  const int d = tc.d;
  ConstantsLedger ledger;
  ledger.d = d;
  ledger.orders = derived_orders(d);
  ledger.delta = tc.delta;
  const int T = ledger.orders.T;
  const int tau = ledger.orders.tau;
  ledger.tracked_t = {d, T, tau - d};

  // script-V_t = C~_t (C_{t+d} + C_{2d} (1 + delta + |u0|_{3d}))
  const double log_C2d = fetch(tc.log_C, 2.0 * d, "C");
  const double log_ball_factor = std::log(1.0 + tc.delta + tc.u0_3d);
  for (int t : ledger.tracked_t) {
    const double log_Ctilde_t = fetch(tc.log_Ctilde, t, "C~");
    const double log_C_td = fetch(tc.log_C, t + d, "C");
    ledger.log_Vt[t] =
        log_Ctilde_t + log_sum_exp(log_C_td, log_C2d + log_ball_factor);
  }

  // V0 = C~_d (1 + delta + |u0|_{2d});  V1 = script-V_T (1 + |u0|_{T+2d})
  ledger.log_V0 = fetch(tc.log_Ctilde, d, "C~") + std::log(1.0 + tc.delta + tc.u0_2d);
  ledger.log_V1 = ledger.log_Vt.at(T) + std::log1p(tc.u0_Tp2d);

  // V = Chat_{3d+3,d} V0 + Chat_{3d+3,T} V1
  ledger.log_V = log_sum_exp(fetch2(tc.log_Chat, 3 * d + 3, d, "Chat") + ledger.log_V0,
                             fetch2(tc.log_Chat, 3 * d + 3, T, "Chat") + ledger.log_V1);

  // U_t = 1 + Chat_{t+2d,t} script-V_t
  for (int t : ledger.tracked_t)
    ledger.log_Ut[t] =
        log1p_exp(fetch2(tc.log_Chat, t + 2 * d, t, "Chat") + ledger.log_Vt.at(t));

  // C0 = C1 Chat_{3d,3d+3} V + Chat_{3d,3d}^2 V^2
  //      + C~3 (Chat_{3d,2d} + Chat_{3d,tau} C_tau (1 + |u0|_{tau+d}))^2
  const double log_lin = tc.log_C1 + fetch2(tc.log_Chat, 3 * d, 3 * d + 3, "Chat") + ledger.log_V;
  const double log_quad =
      2.0 * fetch2(tc.log_Chat, 3 * d, 3 * d, "Chat") + 2.0 * ledger.log_V;
  const double log_err_inner =
      log_sum_exp(fetch2(tc.log_Chat, 3 * d, 2 * d, "Chat"),
                  fetch2(tc.log_Chat, 3 * d, tau, "Chat") + fetch(tc.log_C, tau, "C") +
                      std::log1p(tc.u0_taupd));
  ledger.log_C0 = log_sum_exp({log_lin, log_quad, tc.log_Ctilde3 + 2.0 * log_err_inner});

  // theta0 = max{2, U_T, U_{tau-d}, Chat_{3d,3d} V / delta, C0}
  Theta0Breakdown br;
  br.log_floor = std::log(2.0);
  br.log_U_T = ledger.log_Ut.at(T);
  br.log_U_taumd = ledger.log_Ut.at(tau - d);
  br.log_ball = fetch2(tc.log_Chat, 3 * d, 3 * d, "Chat") + ledger.log_V - std::log(tc.delta);
  br.log_C0 = ledger.log_C0;
  ledger.log_theta0 = br.log_floor;
  br.winner = "floor 2";
  const std::pair<double, const char*> candidates[] = {
      {br.log_U_T, "U_T"},
      {br.log_U_taumd, "U_{tau-d}"},
      {br.log_ball, "Chat V/delta"},
      {br.log_C0, "C0"},
  };
  for (const auto& [value, name] : candidates)
    if (value > ledger.log_theta0) {
      ledger.log_theta0 = value;
      br.winner = name;
    }
  ledger.breakdown = br;
  return ledger;
}

double ThetaSequence::theta(int k) const {
  return std::exp(log_theta.at(static_cast<std::size_t>(k)));
}

ThetaSequence theta_sequence(double theta0, int k_max) {
  if (!(theta0 >= 2.0)) {
    std::ostringstream msg;
    msg << "theta0 = " << theta0 << " is below the minimum admissible scale 2";
    throw Error(ErrCode::below_minimum_scale, msg.str());
  }
  return theta_sequence_log(std::log(theta0), k_max);
}

ThetaSequence theta_sequence_log(double log_theta0, int k_max) {
  if (!(log_theta0 >= std::log(2.0))) {
    std::ostringstream msg;
    msg << "log theta0 = " << log_theta0 << " is below the minimum admissible scale log 2";
    throw Error(ErrCode::below_minimum_scale, msg.str());
  }
  if (k_max < 0) throw Error(ErrCode::invalid_parameter, "theta sequence length must be >= 0");
  ThetaSequence seq;
  seq.log_theta0 = log_theta0;
  seq.log_theta.reserve(static_cast<std::size_t>(k_max) + 1);
  double log_partial = -INFINITY;
  for (int k = 0; k <= k_max; ++k) {
    const double log_theta_k = std::pow(1.25, k) * log_theta0;
    seq.log_theta.push_back(log_theta_k);
    log_partial = log_sum_exp(log_partial, -3.0 * log_theta_k);
  }
  seq.log_partial_sum = log_partial;
  seq.summability_ok = log_partial < -log_theta0;
  return seq;
}

}  // namespace nmk
