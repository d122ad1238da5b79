#pragma once

#include <map>
#include <string>
#include <vector>

#include "nmk/problem.hpp"

namespace nmk {

enum class Termination {
  converged,
  max_steps,
  ball_exit,
  near_singular_inverse,
  divergence,
};

const char* to_string(Termination reason) noexcept;

/// Everything recorded about one executed update u_k -> u_{k+1}.
struct StepRecord {
  int k = 0;
  double log_theta = 0.0;  ///< log theta_k
  double res_2d = 0.0;     ///< |phi(u_k)|_{2d}
  double v_3d3 = 0.0;      ///< |v_k|_{3d+3}
  double v_3d = 0.0;       ///< |v_k|_{3d}
  double dist_3d = 0.0;    ///< |u_k - u0|_{3d}
  double step_3d = 0.0;    ///< |u_{k+1} - u_k|_{3d} (Cauchy bookkeeping)
  std::map<int, double> growth;  ///< t -> |u_k|_{t+2d} at tracked t
  bool lemma_a2 = false;  ///< growth:   1+|u_{k+1}|_{t+2d} <= U_t theta_k^{2d} (1+|u_k|_{t+2d})
  bool lemma_a3 = false;  ///< update:   |v_k|_{3d+3} <= V theta_k^{-3}
  bool lemma_a4 = false;  ///< residual: |u_k-u0|_{3d} < delta and |phi(u_k)|_{2d} <= theta_k^{-4}
};

/// State of the terminal iterate (also filled when a run aborts).
struct FinalState {
  double res_2d = 0.0;
  double dist_3d = 0.0;
  std::map<int, double> growth;
  bool lemma_a4 = false;
};

struct IterationTrace {
  std::vector<StepRecord> steps;
  FinalState final;
  bool hypothesis_violated = false;  ///< |phi(u0)|_{2d} > theta0^-4 at launch
  Termination termination = Termination::max_steps;
  std::string termination_detail;
};

struct IterateOptions {
  int k_max = 50;
  double residual_tol = 1e-12;
};

struct IterationResult {
  GradedElement solution;
  IterationTrace trace;
};

/// Run the update scheme
///   v_k = -psi(u_k) phi(u_k),   u_{k+1} = u_k + S_{theta_k} v_k,
/// theta_{k+1} = theta_k^{5/4}, recording norms and per-step lemma verdicts.
/// A violated launch hypothesis is flagged but the run proceeds; leaving the
/// tame ball, a reciprocal-floor hit inside psi, and three consecutive
/// residual increases terminate with the corresponding reason.
IterationResult iterate(const TameProblem& problem, const GradedElement& u0,
                        const ConstantsLedger& ledger, const IterateOptions& opts = {});

/// Independent re-check of the three lemma inequalities against a recorded
/// trace (used by --verify and by fault-injection tests).
struct LemmaReport {
  struct Row {
    int k;
    bool a2, a3, a4;
  };
  std::vector<Row> rows;
  bool final_a4 = true;
  bool all_pass = true;
  int failures = 0;
};

LemmaReport verify_lemma_bounds(const IterationTrace& trace, const ConstantsLedger& ledger);

/// One record per executed step:
///   k,theta_k,res_2d,v_norm_3d3,dist_3d,lemma_a2,lemma_a3,lemma_a4
/// with a fixed header and %.17g number formatting (byte-stable).
std::string trace_to_csv(const IterationTrace& trace);

}  // namespace nmk
