#pragma once

#include "polyconv/polynomial.hpp"
#include "polyconv/sturm.hpp"

#include <array>
#include <variant>

namespace polyconv {

// L <= d (6d - 3)^(n + r - 1), exact.
Int lojasiewicz_exponent_bound(long d, long n, long r);

// delta_0 = C' * eta^L
Rat delta0_lojasiewicz(const Rat& C_prime, const Rat& eta, const Int& L);
double delta0_lojasiewicz(double C_prime, double eta, long L);

// delta_0 = eta^2 * mu / 2
Rat delta0_concave(const Rat& eta, const Rat& mu);
double delta0_concave(double eta, double mu);

struct WeierstrassPhi {
  Int N;
  UPoly phi;  // ((1/A) t - 1 + delta/(2A))^(2N), expanded
};

// Minimal N making phi >= 0 on R, phi > B on [-A, -delta], phi < epsilon on
// [0, A]; the three exponent inequalities are decided exactly and the two
// interval conditions are certified by Sturm.
WeierstrassPhi weierstrass_phi(const Rat& epsilon, const Rat& delta, const Rat& A, const Rat& B,
                               unsigned expand_budget = 4096);

struct LojasiewiczMode {
  Rat C;  // constant of the distance inequality (supplied, not derived)
  Int L;
};
struct StronglyConcaveMode {
  Rat mu;
};
using ShiftMode = std::variant<LojasiewiczMode, StronglyConcaveMode>;

struct ShiftSpec {
  Rat M, A, delta, epsilon, R;
  Int N;
  std::vector<Polynomial<Rat>> g_list;

  // phi(t) = ((1/A) t - 1 + delta/(2A))^(2N); expanded on request only,
  // N is typically far too large for that.
  UPoly phi_expanded(unsigned expand_budget = 4096) const;
  // the three lower bounds on N, re-evaluated from the stored parameters
  std::array<Rat, 3> n_lower_bounds() const;
};

// M = max{1, A(f,R), B(f,R)}, A = max_i max{1, A(g_i,R)},
// delta = min{A, C (eps/2M)^L} or min{A, eps^2 mu / (8 M^2)},
// N = smallest integer above the three-term bound.
// Strongly-concave mode verifies mu by sampled Hessian eigenvalues.
ShiftSpec shift_params(const Polynomial<Rat>& f, std::vector<Polynomial<Rat>> g_list, const Rat& R,
                       const Rat& epsilon, const ShiftMode& mode);

// h(x) = sum_i phi(g_i(x)) g_i(x), evaluated pointwise by exponentiation in
// the log domain; h is never expanded as a polynomial.
class LazyShift {
 public:
  explicit LazyShift(ShiftSpec spec);

  const ShiftSpec& spec() const { return spec_; }
  int nvars() const { return nvars_; }

  double eval(std::span<const double> x) const;

  struct TermDetail {
    double g_value;
    double log10_abs;  // -inf when the term is exactly zero
    double value;
  };
  std::vector<TermDetail> eval_detail(std::span<const double> x) const;
  // max over terms of log10 |phi(g_i(x)) g_i(x)|; tells apart "underflowed
  // to zero" from "actually zero"
  double log10_abs_bound(std::span<const double> x) const;

 private:
  ShiftSpec spec_;
  std::vector<Polynomial<double>> g_;
  int nvars_;
  double A_, delta_, two_N_;
};

LazyShift build_shift(ShiftSpec spec);

struct ShiftReport {
  bool range_ok = false;      // 0 <= h < epsilon on the X grid
  bool dominance_ok = false;  // f - h on the ball grid dominates min over X minus epsilon
  bool sandwich_ok = false;   // f* - 2 eps <= min_ball (f - h) <= f* + 2 eps
  double h_min_X = 0, h_max_X = 0;
  double f_star_grid = 0;
  double min_fh_X = 0;
  double min_ball_grid = 0;
  double mesh = 0;
};

ShiftReport verify_shift(const Polynomial<Rat>& f, const LazyShift& h, const Rat& epsilon,
                         const std::vector<std::vector<double>>& X_grid,
                         const std::vector<std::vector<double>>& ball_grid, double mesh);

std::string shift_report_json(const ShiftSpec& spec, const ShiftReport& rep);

}  // namespace polyconv
