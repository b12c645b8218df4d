#include "polyconv/shift.hpp"

#include "polyconv/convexify.hpp"
#include "polyconv/grid_kernels.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace polyconv {

Int lojasiewicz_exponent_bound(long d, long n, long r) {
  if (d < 1 || n < 1 || r < 1) throw std::invalid_argument("lojasiewicz_exponent_bound: arguments must be >= 1");
  Int base = 6 * Int(d) - 3;
  Int p;
  mpz_pow_ui(p.get_mpz_t(), base.get_mpz_t(), (unsigned long)(n + r - 1));
  return Int(d) * p;
}

Rat delta0_lojasiewicz(const Rat& C_prime, const Rat& eta, const Int& L) {
  if (C_prime <= 0) throw std::invalid_argument("delta0_lojasiewicz: C' must be positive");
  if (eta < 0) throw std::invalid_argument("delta0_lojasiewicz: eta must be nonnegative");
  return C_prime * pow_rat(eta, L);
}

double delta0_lojasiewicz(double C_prime, double eta, long L) {
  return to_double(delta0_lojasiewicz(rat_from_double(C_prime), rat_from_double(eta), Int(L)));
}

Rat delta0_concave(const Rat& eta, const Rat& mu) {
  if (mu <= 0) throw std::invalid_argument("delta0_concave: mu must be positive");
  if (eta < 0) throw std::invalid_argument("delta0_concave: eta must be nonnegative");
  return eta * eta * mu / 2;
}

double delta0_concave(double eta, double mu) {
  return to_double(delta0_concave(rat_from_double(eta), rat_from_double(mu)));
}

namespace {

// Minimal N >= 0 with c^N < t, for 0 < c < 1 (t > 0). Double estimate,
// exact rational adjustment.
Int minimal_pow_below(const Rat& c, const Rat& t) {
  if (t > 1) return Int(0);
  double est = std::log(to_double(t)) / std::log(to_double(c));
  Int N(std::max(0.0, std::floor(est)));
  while (pow_rat(c, N) >= t) N += 1;
  while (N > 0 && pow_rat(c, N - 1) < t) N -= 1;
  return N;
}

// Minimal N >= 0 with c^N > t, for c > 1.
Int minimal_pow_above(const Rat& c, const Rat& t) {
  if (t < 1) return Int(0);
  double est = std::log(to_double(t)) / std::log(to_double(c));
  Int N(std::max(0.0, std::floor(est)));
  while (pow_rat(c, N) <= t) N += 1;
  while (N > 0 && pow_rat(c, N - 1) > t) N -= 1;
  return N;
}

UPoly phi_from_closed_form(const Rat& A, const Rat& delta, const Int& two_N, unsigned expand_budget) {
  if (two_N > (long)expand_budget)
    throw TermBudgetExceeded();
  UPoly base;
  base.c = {delta / (2 * A) - 1, Rat(1) / A};
  UPoly acc;
  acc.c = {Rat(1)};
  Int e = two_N;
  UPoly b = base;
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) acc = acc * b;
    e >>= 1;
    if (e > 0) b = b * b;
  }
  return acc;
}

}  // namespace

WeierstrassPhi weierstrass_phi(const Rat& epsilon, const Rat& delta, const Rat& A, const Rat& B,
                               unsigned expand_budget) {
  if (epsilon <= 0) throw std::invalid_argument("weierstrass_phi: epsilon must be positive");
  if (B <= 0) throw std::invalid_argument("weierstrass_phi: B must be positive");
  if (delta <= 0 || delta >= A) throw std::invalid_argument("weierstrass_phi: 0 < delta < A required");

  const Rat u = delta / (2 * A);  // in (0, 1/2)
  const Rat c1 = (1 - u) * (1 - u);
  const Rat c2 = u * u;
  const Rat c3 = (1 + u) * (1 + u);
  Int N = minimal_pow_below(c1, epsilon);
  N = std::max(N, minimal_pow_below(c2, epsilon));
  N = std::max(N, minimal_pow_above(c3, B));

  WeierstrassPhi out;
  out.N = N;
  out.phi = phi_from_closed_form(A, delta, 2 * N, expand_budget);

  // certify the two interval conditions by Sturm
  UPoly constB, constEps;
  constB.c = {B};
  constEps.c = {epsilon};
  if (!is_positive_on_interval(out.phi - constB, -A, -delta))
    throw std::logic_error("weierstrass_phi: phi > B certification failed (internal)");
  if (!is_positive_on_interval(constEps - out.phi, Rat(0), A))
    throw std::logic_error("weierstrass_phi: phi < epsilon certification failed (internal)");
  return out;
}

UPoly ShiftSpec::phi_expanded(unsigned expand_budget) const {
  return phi_from_closed_form(A, delta, 2 * N, expand_budget);
}

std::array<Rat, 3> ShiftSpec::n_lower_bounds() const {
  const Rat r((long)g_list.size());
  return {((r - 1) * A - 1) / 2, A * (2 * M + 1 - delta) / (delta * delta),
          (2 * r * A - epsilon) / (2 * epsilon)};
}

namespace {

// Sampled verification that every g is mu-strongly concave: largest Hessian
// eigenvalue <= -mu (+ slack) at lattice points of the bounding box of B(R).
void verify_strong_concavity(const std::vector<Polynomial<Rat>>& gs, const Rat& R, const Rat& mu) {
  const double Rd = to_double(R);
  const double mud = to_double(mu);
  for (const auto& g : gs) {
    const int n = g.nvars();
    const Polynomial<double> gd = to_double_poly(g);
    auto H = gd.hessian();
    const int per_dim = n <= 2 ? 17 : 5;
    std::int64_t total = 1;
    for (int i = 0; i < n; ++i) total *= per_dim;
    std::vector<double> x((std::size_t)n);
    Eigen::MatrixXd M(n, n);
    for (std::int64_t it = 0; it < total; ++it) {
      std::int64_t k = it;
      for (int i = 0; i < n; ++i) {
        x[(std::size_t)i] = -Rd + 2.0 * Rd * (double)(k % per_dim) / (double)(per_dim - 1);
        k /= per_dim;
      }
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = H[(std::size_t)i][(std::size_t)j].evaluate(std::span<const double>(x));
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
      if (es.eigenvalues().maxCoeff() > -mud + 1e-9)
        throw std::invalid_argument("shift_params: sampled Hessian violates mu-strong concavity of a constraint");
    }
  }
}

}  // namespace

ShiftSpec shift_params(const Polynomial<Rat>& f, std::vector<Polynomial<Rat>> g_list, const Rat& R,
                       const Rat& epsilon, const ShiftMode& mode) {
  if (epsilon <= 0) throw std::invalid_argument("shift_params: epsilon must be positive");
  if (g_list.empty()) throw std::invalid_argument("shift_params: empty constraint list");
  if (R <= 0) throw std::invalid_argument("shift_params: R must be positive");
  for (const auto& g : g_list)
    if (g.nvars() != f.nvars()) throw std::invalid_argument("shift_params: arity mismatch");

  ShiftSpec s;
  s.epsilon = epsilon;
  s.R = R;
  s.M = std::max({Rat(1), bound_A(f, R), bound_B(f, R)});
  s.A = Rat(1);
  for (const auto& g : g_list) s.A = std::max(s.A, bound_A(g, R));

  if (const LojasiewiczMode* lm = std::get_if<LojasiewiczMode>(&mode)) {
    if (lm->C <= 0) throw std::invalid_argument("shift_params: Lojasiewicz constant must be positive");
    if (lm->L < 1) throw std::invalid_argument("shift_params: Lojasiewicz exponent must be >= 1");
    s.delta = std::min(s.A, Rat(lm->C * pow_rat(epsilon / (2 * s.M), lm->L)));
  } else {
    const StronglyConcaveMode& cm = std::get<StronglyConcaveMode>(mode);
    if (cm.mu <= 0) throw std::invalid_argument("shift_params: mu must be positive");
    verify_strong_concavity(g_list, R, cm.mu);
    s.delta = std::min(s.A, Rat(epsilon * epsilon * cm.mu / (8 * s.M * s.M)));
  }
  if (s.delta <= 0) throw std::invalid_argument("shift_params: derived delta is nonpositive");

  const Rat r((long)g_list.size());
  // first two bounds strict (the proof needs them strict), third from >=
  const Rat b1 = ((r - 1) * s.A - 1) / 2;
  const Rat b2 = s.A * (2 * s.M + 1 - s.delta) / (s.delta * s.delta);
  const Rat b3 = (2 * r * s.A - epsilon) / (2 * epsilon);
  Int N = floor_rat(b1) + 1;
  N = std::max(N, Int(floor_rat(b2) + 1));
  N = std::max(N, ceil_rat(b3));
  if (N < 0) N = 0;
  s.N = N;
  s.g_list = std::move(g_list);
  return s;
}

LazyShift::LazyShift(ShiftSpec spec) : spec_(std::move(spec)) {
  if (spec_.g_list.empty()) throw std::invalid_argument("LazyShift: empty constraint list");
  nvars_ = spec_.g_list[0].nvars();
  for (const auto& g : spec_.g_list) g_.push_back(to_double_poly(g));
  A_ = to_double(spec_.A);
  delta_ = to_double(spec_.delta);
  two_N_ = 2.0 * spec_.N.get_d();
}

LazyShift build_shift(ShiftSpec spec) { return LazyShift(std::move(spec)); }

std::vector<LazyShift::TermDetail> LazyShift::eval_detail(std::span<const double> x) const {
  if ((int)x.size() != nvars_) throw std::invalid_argument("LazyShift: dimension mismatch");
  std::vector<TermDetail> out;
  out.reserve(g_.size());
  const double base_shift = -1.0 + delta_ / (2.0 * A_);
  for (const auto& g : g_) {
    const double t = g.evaluate(x);
    TermDetail d{t, -std::numeric_limits<double>::infinity(), 0.0};
    const double base = t / A_ + base_shift;
    if (t != 0.0 && base != 0.0) {
      // |phi(t) * t| in the log domain; phi = base^(2N) >= 0
      const double log_abs = two_N_ * std::log(std::fabs(base)) + std::log(std::fabs(t));
      d.log10_abs = log_abs / std::numbers::ln10;
      const double mag = std::exp(log_abs);
      d.value = t >= 0 ? mag : -mag;
    }
    out.push_back(d);
  }
  return out;
}

double LazyShift::eval(std::span<const double> x) const {
  double h = 0;
  for (const auto& d : eval_detail(x)) h += d.value;
  return h;
}

double LazyShift::log10_abs_bound(std::span<const double> x) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& d : eval_detail(x)) best = std::max(best, d.log10_abs);
  return best;
}

ShiftReport verify_shift(const Polynomial<Rat>& f, const LazyShift& h, const Rat& epsilon,
                         const std::vector<std::vector<double>>& X_grid,
                         const std::vector<std::vector<double>>& ball_grid, double mesh) {
  const Polynomial<double> fd = to_double_poly(f);
  const double eps = to_double(epsilon);

  ShiftReport rep;
  rep.mesh = mesh;

  const auto h_at = [&](const std::vector<double>& p) { return h.eval(std::span<const double>(p)); };
  const auto f_at = [&](const std::vector<double>& p) { return fd.evaluate(std::span<const double>(p)); };

  // (a) range of h over the X grid
  {
    const ScanResult mn = scan_min((std::int64_t)X_grid.size(), [&](std::int64_t i) { return h_at(X_grid[(std::size_t)i]); });
    const ScanResult mx = scan_max((std::int64_t)X_grid.size(), [&](std::int64_t i) { return h_at(X_grid[(std::size_t)i]); });
    rep.h_min_X = mn.value;
    rep.h_max_X = mx.value;
    rep.range_ok = mn.value >= 0.0 && mx.value < eps;
  }

  // (b) dominance: f - h on the ball grid vs min over the X grid minus eps
  {
    const ScanResult mnX = scan_min((std::int64_t)X_grid.size(),
                                    [&](std::int64_t i) { return f_at(X_grid[(std::size_t)i]) - h_at(X_grid[(std::size_t)i]); });
    rep.min_fh_X = mnX.value;
    const ScanResult mnB = scan_min((std::int64_t)ball_grid.size(),
                                    [&](std::int64_t i) { return f_at(ball_grid[(std::size_t)i]) - h_at(ball_grid[(std::size_t)i]); });
    rep.min_ball_grid = mnB.value;
    rep.dominance_ok = mnB.value >= mnX.value - eps - 1e-12 * (1.0 + std::fabs(mnX.value));
  }

  // (c) sandwich around the brute-force minimum of f on X
  {
    const ScanResult fstar = scan_min((std::int64_t)X_grid.size(), [&](std::int64_t i) { return f_at(X_grid[(std::size_t)i]); });
    rep.f_star_grid = fstar.value;
    rep.sandwich_ok = fstar.value - 2.0 * eps <= rep.min_ball_grid && rep.min_ball_grid <= fstar.value + 2.0 * eps;
  }
  return rep;
}

std::string shift_report_json(const ShiftSpec& spec, const ShiftReport& rep) {
  std::ostringstream os;
  os << "{\"spec\":{\"M\":\"" << rat_str(spec.M) << "\",\"A\":\"" << rat_str(spec.A) << "\",\"delta\":\""
     << rat_str(spec.delta) << "\",\"N\":\"" << spec.N.get_str() << "\"},\"flags\":{\"range_ok\":"
     << (rep.range_ok ? "true" : "false") << ",\"dominance_ok\":" << (rep.dominance_ok ? "true" : "false")
     << ",\"sandwich_ok\":" << (rep.sandwich_ok ? "true" : "false") << "},\"f_star_grid\":\""
     << double_str(rep.f_star_grid) << "\",\"min_ball_grid\":\"" << double_str(rep.min_ball_grid)
     << "\",\"mesh\":\"" << double_str(rep.mesh) << "\"}";
  return os.str();
}

}  // namespace polyconv
