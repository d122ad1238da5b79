#include "nmk/iteration.hpp"

#include <cmath>
#include <cstdio>

namespace nmk {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Lemma A.2-type growth:  1+|u_{k+1}|_{t+2d} <= U_t theta_k^{2d} (1+|u_k|_{t+2d}).
bool growth_ok(const std::map<int, double>& now, const std::map<int, double>& next,
               const ConstantsLedger& ledger, double log_theta) {
  for (const auto& [t, value_now] : now) {
    const double lhs = std::log1p(next.at(t));
    const double rhs = ledger.log_Ut.at(t) + 2.0 * ledger.d * log_theta + std::log1p(value_now);
    if (lhs > rhs) return false;
  }
  return true;
}

/// Lemma A.3-type update bound:  |v_k|_{3d+3} <= V theta_k^-3.
bool update_ok(double v_3d3, const ConstantsLedger& ledger, double log_theta) {
  return std::log(v_3d3) <= ledger.log_V - 3.0 * log_theta;
}

/// Lemma A.4-type residual bound:  |u_k-u0|_{3d} < delta and |phi(u_k)|_{2d} <= theta_k^-4.
bool residual_ok(double dist_3d, double res_2d, const ConstantsLedger& ledger, double log_theta) {
  return dist_3d < ledger.delta && std::log(res_2d) <= -4.0 * log_theta;
}

}  // namespace

const char* to_string(Termination reason) noexcept {
  switch (reason) {
    case Termination::converged: return "converged";
    case Termination::max_steps: return "max-steps";
    case Termination::ball_exit: return "ball-exit";
    case Termination::near_singular_inverse: return "near-singular-inverse";
    case Termination::divergence: return "divergence";
  }
  return "unknown";
}

IterationResult iterate(const TameProblem& problem, const GradedElement& u0,
                        const ConstantsLedger& ledger, const IterateOptions& opts) {
  if (opts.k_max < 0) throw Error(ErrCode::invalid_parameter, "k_max must be nonnegative");
  if (!(opts.residual_tol >= 0.0))
    throw Error(ErrCode::invalid_parameter, "residual tolerance must be nonnegative");

  const double order_res = 2.0 * ledger.d;    // residual norm index
  const double order_ball = 3.0 * ledger.d;   // ball / Cauchy norm index
  const double order_update = 3.0 * ledger.d + 3.0;

  const auto growth_of = [&](const GradedElement& u) {
    std::map<int, double> g;
    for (int t : ledger.tracked_t) g[t] = u.norm(t + 2.0 * ledger.d);
    return g;
  };
  const auto dist_of = [&](const GradedElement& u) {
    return add(u, scale(u0, -1.0)).norm(order_ball);
  };

  IterationTrace trace;
  GradedElement u = u0;
  GradedElement phi_u = problem.phi(u);
  double res = phi_u.norm(order_res);
  trace.hypothesis_violated = std::log(res) > -4.0 * ledger.log_theta0;

  Termination term = Termination::max_steps;
  std::string detail;
  int consecutive_increases = 0;

  for (int k = 0; k < opts.k_max; ++k) {
    if (res < opts.residual_tol) {
      term = Termination::converged;
      break;
    }

    StepRecord rec;
    rec.k = k;
    rec.log_theta = ledger.log_theta(k);
    rec.res_2d = res;
    rec.dist_3d = dist_of(u);
    rec.growth = growth_of(u);

    GradedElement v;
    try {
      v = scale(problem.psi(u, phi_u), -1.0);
    } catch (const Error& e) {
      if (e.code() == ErrCode::near_singular_inverse) {
        term = Termination::near_singular_inverse;
        detail = e.what();
        break;
      }
      throw;
    }
    rec.v_3d3 = v.norm(order_update);
    rec.v_3d = v.norm(order_ball);

    const GradedElement increment = smooth_log(v, rec.log_theta);
    rec.step_3d = increment.norm(order_ball);
    const GradedElement u_next = add(u, increment);

    const GradedElement phi_next = problem.phi(u_next);
    const double res_next = phi_next.norm(order_res);
    const double dist_next = dist_of(u_next);

    rec.lemma_a2 = growth_ok(rec.growth, growth_of(u_next), ledger, rec.log_theta);
    rec.lemma_a3 = update_ok(rec.v_3d3, ledger, rec.log_theta);
    rec.lemma_a4 = residual_ok(rec.dist_3d, rec.res_2d, ledger, rec.log_theta);
    trace.steps.push_back(rec);

    if (dist_next >= ledger.delta) {
      term = Termination::ball_exit;
      char buf[128];
      std::snprintf(buf, sizeof buf, "|u_%d - u_0|_{3d} = %.6g left the tame ball of radius %.6g",
                    k + 1, dist_next, ledger.delta);
      detail = buf;
      u = u_next;
      phi_u = phi_next;
      res = res_next;
      break;
    }

    if (res_next > res) {
      if (++consecutive_increases >= 3) {
        term = Termination::divergence;
        detail = "residual increased on three consecutive steps";
        u = u_next;
        phi_u = phi_next;
        res = res_next;
        break;
      }
    } else {
      consecutive_increases = 0;
    }

    u = u_next;
    phi_u = phi_next;
    res = res_next;
  }

  if (term == Termination::max_steps && res < opts.residual_tol) term = Termination::converged;

  trace.final.res_2d = res;
  trace.final.dist_3d = dist_of(u);
  trace.final.growth = growth_of(u);
  trace.final.lemma_a4 = residual_ok(trace.final.dist_3d, trace.final.res_2d, ledger,
                                     ledger.log_theta(static_cast<int>(trace.steps.size())));
  trace.termination = term;
  trace.termination_detail = detail;
  return IterationResult{std::move(u), std::move(trace)};
}

LemmaReport verify_lemma_bounds(const IterationTrace& trace, const ConstantsLedger& ledger) {
  LemmaReport report;
  const std::size_t n = trace.steps.size();
  for (std::size_t i = 0; i < n; ++i) {
    const StepRecord& rec = trace.steps[i];
    const std::map<int, double>& growth_next =
        (i + 1 < n) ? trace.steps[i + 1].growth : trace.final.growth;
    LemmaReport::Row row;
    row.k = rec.k;
    row.a2 = growth_ok(rec.growth, growth_next, ledger, rec.log_theta);
    row.a3 = update_ok(rec.v_3d3, ledger, rec.log_theta);
    row.a4 = residual_ok(rec.dist_3d, rec.res_2d, ledger, rec.log_theta);
    if (!row.a2 || !row.a3 || !row.a4) ++report.failures;
    report.rows.push_back(row);
  }
  report.final_a4 =
      residual_ok(trace.final.dist_3d, trace.final.res_2d, ledger,
                  ledger.log_theta(static_cast<int>(n)));
  if (!report.final_a4) ++report.failures;
  report.all_pass = report.failures == 0;
  return report;
}

std::string trace_to_csv(const IterationTrace& trace) {
  std::string out = "k,theta_k,res_2d,v_norm_3d3,dist_3d,lemma_a2,lemma_a3,lemma_a4\n";
  for (const StepRecord& rec : trace.steps) {
    out += std::to_string(rec.k);
    out += ',';
    out += fmt(std::exp(rec.log_theta));
    out += ',';
    out += fmt(rec.res_2d);
    out += ',';
    out += fmt(rec.v_3d3);
    out += ',';
    out += fmt(rec.dist_3d);
    out += ',';
    out += rec.lemma_a2 ? '1' : '0';
    out += ',';
    out += rec.lemma_a3 ? '1' : '0';
    out += ',';
    out += rec.lemma_a4 ? '1' : '0';
    out += '\n';
  }
  return out;
}

}  // namespace nmk
