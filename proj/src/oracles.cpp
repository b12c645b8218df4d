#include "polyconv/oracles.hpp"

#include <cmath>

namespace polyconv {
namespace oracles {

double oracle_eval(const Polynomial<double>& p, std::span<const double> x) {
  if ((int)x.size() != p.nvars()) throw std::invalid_argument("oracle_eval: dimension mismatch");
  double acc = 0;
  for (const auto& [m, c] : p.terms()) {
    double t = c;
    for (int i = 0; i < p.nvars(); ++i)
      for (std::uint32_t e = 0; e < m[(std::size_t)i]; ++e) t *= x[(std::size_t)i];
    acc += t;
  }
  return acc;
}

GridReport grid_min(const Polynomial<double>& f, const ConvexSet& X, double mesh) {
  if (f.nvars() != set_dim(X)) throw std::invalid_argument("grid_min: arity mismatch");
  const Lattice L = bounding_lattice(X, mesh);
  const int n = set_dim(X);
  std::vector<double> x((std::size_t)n);
  GridReport rep;
  rep.mesh = mesh;
  rep.min_value = std::numeric_limits<double>::infinity();
  const std::int64_t total = L.total();
  for (std::int64_t i = 0; i < total; ++i) {
    L.point(i, x);
    if (!contains(X, x, 1e-12)) continue;
    ++rep.point_count;
    const double v = oracle_eval(f, x);
    if (v < rep.min_value) {
      rep.min_value = v;
      rep.argmin = x;
    }
  }
  if (rep.point_count == 0) {
    rep.argmin = set_witness(X);
    rep.min_value = oracle_eval(f, rep.argmin);
    rep.point_count = 1;
  }
  return rep;
}

std::vector<double> fd_gradient(const Polynomial<double>& f, std::span<const double> x, double h) {
  const int n = f.nvars();
  if ((int)x.size() != n) throw std::invalid_argument("fd_gradient: dimension mismatch");
  double nx = 0;
  for (double v : x) nx += v * v;
  if (h <= 0) h = 1e-5 * (1.0 + std::sqrt(nx));
  std::vector<double> g((std::size_t)n), xp(x.begin(), x.end());
  for (int i = 0; i < n; ++i) {
    const double xi = xp[(std::size_t)i];
    xp[(std::size_t)i] = xi + h;
    const double fp = oracle_eval(f, xp);
    xp[(std::size_t)i] = xi - h;
    const double fm = oracle_eval(f, xp);
    xp[(std::size_t)i] = xi;
    g[(std::size_t)i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

std::vector<std::vector<double>> fd_hessian(const Polynomial<double>& f, std::span<const double> x, double h) {
  const int n = f.nvars();
  if ((int)x.size() != n) throw std::invalid_argument("fd_hessian: dimension mismatch");
  double nx = 0;
  for (double v : x) nx += v * v;
  if (h <= 0) h = 1e-5 * (1.0 + std::sqrt(nx));
  std::vector<std::vector<double>> H((std::size_t)n, std::vector<double>((std::size_t)n, 0.0));
  std::vector<double> xp(x.begin(), x.end());
  const double f0 = oracle_eval(f, xp);
  for (int i = 0; i < n; ++i) {
    const double xi = xp[(std::size_t)i];
    xp[(std::size_t)i] = xi + h;
    const double fp = oracle_eval(f, xp);
    xp[(std::size_t)i] = xi - h;
    const double fm = oracle_eval(f, xp);
    xp[(std::size_t)i] = xi;
    H[(std::size_t)i][(std::size_t)i] = (fp - 2.0 * f0 + fm) / (h * h);
    for (int j = i + 1; j < n; ++j) {
      const double xj = xp[(std::size_t)j];
      xp[(std::size_t)i] = xi + h;
      xp[(std::size_t)j] = xj + h;
      const double fpp = oracle_eval(f, xp);
      xp[(std::size_t)j] = xj - h;
      const double fpm = oracle_eval(f, xp);
      xp[(std::size_t)i] = xi - h;
      const double fmm = oracle_eval(f, xp);
      xp[(std::size_t)j] = xj + h;
      const double fmp = oracle_eval(f, xp);
      xp[(std::size_t)i] = xi;
      xp[(std::size_t)j] = xj;
      H[(std::size_t)i][(std::size_t)j] = H[(std::size_t)j][(std::size_t)i] = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
    }
  }
  return H;
}

double level_set_distance(const Polynomial<double>& f, const ConvexSet& X, std::span<const double> from,
                          double level, double mesh) {
  const int n = set_dim(X);
  if (f.nvars() != n || (int)from.size() != n) throw std::invalid_argument("level_set_distance: arity mismatch");
  const double R = radius_bound(X);
  // Lipschitz-consistent level thickness over one cell diagonal; candidates
  // in the band are resolved to exact crossings below.
  const double band = bound_B(f, R) * mesh * std::sqrt((double)n) * 1.01 + 1e-12;
  const Lattice L = bounding_lattice(X, mesh);
  const double f_from = oracle_eval(f, from);

  auto dist = [&](std::span<const double> a, std::span<const double> b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
  };

  double best = std::numeric_limits<double>::infinity();
  std::vector<double> x((std::size_t)n), z((std::size_t)n);
  const std::int64_t total = L.total();
  const double on_level_tol = 1e-11 * (1.0 + std::fabs(level));
  if (std::fabs(f_from - level) <= on_level_tol) return 0.0;  // from is a level point
  for (std::int64_t i = 0; i < total; ++i) {
    L.point(i, x);
    if (!contains(X, x, 1e-12)) continue;
    const double fx = oracle_eval(f, x);
    if (std::fabs(fx - level) > band) continue;
    if (std::fabs(fx - level) <= on_level_tol) {
      best = std::min(best, dist(from, x));
      continue;
    }
    // only exact crossings count; the segment from -> x stays in X by
    // convexity, so the bisected root is a feasible level point
    if ((f_from - level) * (fx - level) < 0) {
      double lo = 0.0, hi = 1.0;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        for (int k = 0; k < n; ++k)
          z[(std::size_t)k] = from[(std::size_t)k] + mid * (x[(std::size_t)k] - from[(std::size_t)k]);
        const double fz = oracle_eval(f, z);
        if ((f_from - level) * (fz - level) < 0)
          hi = mid;
        else
          lo = mid;
      }
      best = std::min(best, hi * dist(from, x));
    }
  }
  return best;
}

int sign_scan_roots(const Polynomial<double>& p, double a, double b, int points) {
  if (p.nvars() != 1) throw std::invalid_argument("sign_scan_roots: univariate polynomial required");
  if (p.is_zero()) throw std::invalid_argument("sign_scan_roots: zero polynomial");
  if (!(a < b)) throw std::invalid_argument("sign_scan_roots: a < b required");
  if (points < 2) points = 2;
  int roots = 0;
  int last_nonzero = 0;
  bool pending_zero = false;
  for (int k = 0; k <= points; ++k) {
    const double t = a + (b - a) * (double)k / (double)points;
    const double v = oracle_eval(p, std::span<const double>(&t, 1));
    if (v == 0.0) {
      ++roots;
      pending_zero = true;
      continue;
    }
    const int s = v > 0 ? 1 : -1;
    if (!pending_zero && last_nonzero != 0 && s != last_nonzero) ++roots;
    last_nonzero = s;
    pending_zero = false;
  }
  return roots;
}

}  // namespace oracles
}  // namespace polyconv
