#pragma once

#include "polyconv/convexify.hpp"
#include "polyconv/sets.hpp"

#include <limits>

namespace polyconv {

struct ProximityConfig {
  long N = 6;  // exponent after normalization; the formula bound gives 6
  double tol_outer = 1e-8;
  double tol_inner = 1e-10;
  int max_outer = 10000;
  int max_inner = 100000;
  double mu_floor = 1e-12;
  double tol_critical = 1e-6;
};

enum class ProxStatus { Converged, MaxIterations, InnerFailure };
const char* prox_status_name(ProxStatus s);

struct StepCheck {
  double mu_hat = 0;
  double descent_rhs = 0;
  double descent_slack = 0;  // rhs - f(a_{nu+1}); nonnegative when the lemma holds
  bool descent_pass = false;
  double dist_oracle = std::numeric_limits<double>::quiet_NaN();
  double dist_slack = std::numeric_limits<double>::quiet_NaN();
  bool dist_pass = false;
};

struct PreparedProblem {
  AffineMap tau;
  ConvexSet X;                   // normalized set, inside the radius-1/2 ball
  Polynomial<double> f_norm;     // f composed with tau^{-1}
  Polynomial<double> f_shifted;  // f_norm + c
  double D = 1;
  double c = 2;
};

// Normalize X into a ball of radius 1/2, bound |f| and its first two
// directional derivatives by D, and shift by c = 2D so the minimum of the
// shifted objective is at least D.
PreparedProblem prepare(const Polynomial<double>& f, const ConvexSet& X);

struct InnerResult {
  std::vector<double> x;
  bool ok = false;
  int iterations = 0;
  double residual = 0;
};

// Projected gradient with Armijo backtracking on a strongly convex phi.
InnerResult inner_argmin(const PhiN& phi, const ConvexSet& X, std::span<const double> start,
                         const ProximityConfig& cfg = {});

struct ProximityTrace {
  PreparedProblem prep;
  std::vector<std::vector<double>> iterates;       // original coordinates
  std::vector<std::vector<double>> iterates_norm;  // normalized coordinates
  std::vector<double> values;                      // shifted objective at the iterates
  std::vector<double> steps;                       // normalized step norms
  std::vector<StepCheck> checks;                   // one per step
  double mu_est = std::numeric_limits<double>::infinity();
  ProxStatus status = ProxStatus::MaxIterations;
  bool critical = false;
};

// a_{nu+1} = argmin_X phi_{N, a_nu} on the prepared problem; stops when the
// normalized step norm drops to tol_outer and the lower-criticality gate
// passes at the mapped-back point.
ProximityTrace iterate(const Polynomial<double>& f, const ConvexSet& X, std::span<const double> a0,
                       const ProximityConfig& cfg = {});

// <grad f(a), x - a> >= -tol |x - a| for sampled x in X near a; Ball and Box
// additionally check the closed-form normal-cone condition and must agree.
bool check_lower_critical(const Polynomial<double>& f, const ConvexSet& X, std::span<const double> a,
                          double tol = 1e-6);

struct StepLemmaReport {
  int steps_checked = 0;
  int dist_passes = 0;
  int descent_passes = 0;
  bool all_dist_pass = false;
  bool all_descent_pass = false;
  double max_dist_slack = 0;
  double min_mu_hat = std::numeric_limits<double>::infinity();
};

// Fills the per-step distance-identity slacks (brute-force level-set oracle)
// and re-evaluates the descent inequality.
StepLemmaReport verify_step_lemmas(ProximityTrace& trace, double grid_mesh);

// JSON lines, one record per outer iteration.
std::string trace_jsonl(const ProximityTrace& trace);

}  // namespace polyconv
