#include "polyconv/sets.hpp"

#include "polyconv/psd.hpp"

#include <cmath>

namespace polyconv {

namespace {

double norm2(std::span<const double> x) {
  double s = 0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Solve A x = b by Gaussian elimination with partial pivoting;
// nullopt when (near-)singular.
std::optional<std::vector<double>> solve_linear(std::vector<std::vector<double>> A, std::vector<double> b) {
  const std::size_t n = A.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
    if (std::fabs(A[piv][col]) < 1e-12) return std::nullopt;
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = A[r][col] / A[col][col];
      if (f == 0) continue;
      for (std::size_t c = col; c < n; ++c) A[r][c] -= f * A[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= A[i][j] * x[j];
    x[i] = s / A[i][i];
  }
  return x;
}

std::vector<std::vector<double>> polytope_vertices(const Halfspaces& H) {
  const int n = (int)H.witness.size();
  const int m = (int)H.normals.size();
  std::vector<std::vector<double>> verts;
  std::vector<int> pick(n);
  // all n-subsets of constraints
  auto feasible = [&](std::span<const double> x) {
    for (int i = 0; i < m; ++i) {
      double scale = std::max(1.0, norm2(H.normals[i]));
      if (dot(H.normals[i], x) - H.offsets[i] > 1e-8 * scale) return false;
    }
    return true;
  };
  std::vector<int> comb(n);
  auto rec = [&](auto&& self, int start, int k) -> void {
    if (k == n) {
      std::vector<std::vector<double>> A(n);
      std::vector<double> b(n);
      for (int i = 0; i < n; ++i) {
        A[i] = H.normals[comb[i]];
        b[i] = H.offsets[comb[i]];
      }
      if (auto x = solve_linear(std::move(A), std::move(b)); x && feasible(*x)) verts.push_back(*x);
      return;
    }
    for (int i = start; i <= m - (n - k); ++i) {
      comb[k] = i;
      self(self, i + 1, k + 1);
    }
  };
  if (m >= n) rec(rec, 0, 0);
  return verts;
}

// Spot check for a nontrivial recession direction (unbounded polyhedron).
bool has_recession_direction(const Halfspaces& H) {
  const int n = (int)H.witness.size();
  const int m = (int)H.normals.size();
  // deterministic direction sweep; adequate for the small systems used here
  const int K = n == 1 ? 2 : (n == 2 ? 3600 : 20000);
  std::vector<double> d(n);
  std::uint64_t state = 0x9e3779b97f4a7c15ull;
  auto next01 = [&]() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return (double)(state >> 11) * 0x1.0p-53;
  };
  for (int k = 0; k < K; ++k) {
    if (n == 1) {
      d[0] = k == 0 ? 1.0 : -1.0;
    } else if (n == 2) {
      const double th = 2.0 * M_PI * (double)k / (double)K;
      d[0] = std::cos(th);
      d[1] = std::sin(th);
    } else {
      double nn = 0;
      for (int i = 0; i < n; ++i) {
        d[i] = 2.0 * next01() - 1.0;
        nn += d[i] * d[i];
      }
      if (nn < 1e-12) continue;
      nn = std::sqrt(nn);
      for (int i = 0; i < n; ++i) d[i] /= nn;
    }
    bool recession = true;
    for (int i = 0; i < m && recession; ++i)
      if (dot(H.normals[i], d) > 1e-9) recession = false;
    if (recession) return true;
  }
  return false;
}

std::vector<double> project_halfspace(std::span<const double> v, std::span<const double> a, double b) {
  const double an = dot(a, a);
  std::vector<double> out(v.begin(), v.end());
  if (an == 0) return out;
  const double viol = dot(a, v) - b;
  if (viol > 0) {
    const double f = viol / an;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= f * a[i];
  }
  return out;
}

}  // namespace

Ball make_ball(std::vector<double> center, double radius) {
  if (radius <= 0) throw std::invalid_argument("make_ball: radius must be positive");
  if (center.empty()) throw std::invalid_argument("make_ball: empty center");
  return Ball{std::move(center), radius};
}

Box make_box(std::vector<double> lo, std::vector<double> hi) {
  if (lo.size() != hi.size() || lo.empty()) throw std::invalid_argument("make_box: dimension mismatch");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (lo[i] > hi[i]) throw std::invalid_argument("make_box: lo <= hi required componentwise");
  return Box{std::move(lo), std::move(hi)};
}

Halfspaces make_halfspaces(std::vector<std::vector<double>> normals, std::vector<double> offsets,
                           std::vector<double> witness) {
  if (normals.empty() || normals.size() != offsets.size() || witness.empty())
    throw std::invalid_argument("make_halfspaces: inconsistent sizes");
  for (const auto& a : normals)
    if (a.size() != witness.size()) throw std::invalid_argument("make_halfspaces: dimension mismatch");
  Halfspaces H{std::move(normals), std::move(offsets), std::move(witness)};
  for (std::size_t i = 0; i < H.normals.size(); ++i)
    if (dot(H.normals[i], H.witness) - H.offsets[i] > 1e-9)
      throw std::invalid_argument("make_halfspaces: witness point is infeasible");
  return H;
}

BasicSublevel make_basic_sublevel(std::vector<Polynomial<double>> gs, double bounding_radius,
                                  std::vector<double> witness) {
  if (gs.empty()) throw std::invalid_argument("make_basic_sublevel: empty constraint list");
  if (bounding_radius <= 0) throw std::invalid_argument("make_basic_sublevel: bounding radius must be positive");
  const int n = gs[0].nvars();
  if ((int)witness.size() != n) throw std::invalid_argument("make_basic_sublevel: witness dimension mismatch");
  // sampled concavity check: -H_g must not be indefinite anywhere on a coarse grid
  for (const auto& g : gs) {
    if (g.nvars() != n) throw std::invalid_argument("make_basic_sublevel: arity mismatch");
    auto H = g.hessian();
    const int per_dim = n <= 2 ? 9 : 4;
    std::vector<double> x(n);
    std::int64_t total = 1;
    for (int i = 0; i < n; ++i) total *= per_dim;
    for (std::int64_t it = 0; it < total; ++it) {
      std::int64_t k = it;
      for (int i = 0; i < n; ++i) {
        x[i] = -bounding_radius + 2.0 * bounding_radius * (double)(k % per_dim) / (double)(per_dim - 1);
        k /= per_dim;
      }
      std::vector<std::vector<double>> Hm(n, std::vector<double>(n));
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) Hm[r][c] = -H[r][c].evaluate(std::span<const double>(x));
      if (sylvester_psd(Hm) == PsdClass::Indefinite)
        throw std::invalid_argument("make_basic_sublevel: constraint fails sampled concavity check");
    }
  }
  return BasicSublevel{std::move(gs), bounding_radius, std::move(witness)};
}

int set_dim(const ConvexSet& X) {
  return std::visit(
      [](const auto& s) -> int {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Ball>) return (int)s.center.size();
        else if constexpr (std::is_same_v<S, Box>) return (int)s.lo.size();
        else if constexpr (std::is_same_v<S, Halfspaces>) return (int)s.witness.size();
        else return (int)s.witness.size();
      },
      X);
}

std::vector<double> set_witness(const ConvexSet& X) {
  return std::visit(
      [](const auto& s) -> std::vector<double> {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Ball>) return s.center;
        else if constexpr (std::is_same_v<S, Box>) {
          std::vector<double> m(s.lo.size());
          for (std::size_t i = 0; i < m.size(); ++i) m[i] = 0.5 * (s.lo[i] + s.hi[i]);
          return m;
        } else if constexpr (std::is_same_v<S, Halfspaces>) return s.witness;
        else return s.witness;
      },
      X);
}

bool contains(const ConvexSet& X, std::span<const double> x, double tol) {
  if ((int)x.size() != set_dim(X)) throw std::invalid_argument("contains: dimension mismatch");
  return std::visit(
      [&](const auto& s) -> bool {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Ball>) {
          double d2 = 0;
          for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = x[i] - s.center[i];
            d2 += d * d;
          }
          return std::sqrt(d2) <= s.radius + tol;
        } else if constexpr (std::is_same_v<S, Box>) {
          for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] < s.lo[i] - tol || x[i] > s.hi[i] + tol) return false;
          return true;
        } else if constexpr (std::is_same_v<S, Halfspaces>) {
          for (std::size_t i = 0; i < s.normals.size(); ++i) {
            const double scale = std::max(1.0, norm2(s.normals[i]));
            if (dot(s.normals[i], x) - s.offsets[i] > tol * scale) return false;
          }
          return true;
        } else {
          for (const auto& g : s.gs)
            if (g.evaluate(x) < -tol) return false;
          return true;
        }
      },
      X);
}

std::vector<double> project(const ConvexSet& X, std::span<const double> y) {
  if ((int)y.size() != set_dim(X)) throw std::invalid_argument("project: dimension mismatch");
  return std::visit(
      [&](const auto& s) -> std::vector<double> {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Ball>) {
          std::vector<double> d(y.size());
          double n2 = 0;
          for (std::size_t i = 0; i < y.size(); ++i) {
            d[i] = y[i] - s.center[i];
            n2 += d[i] * d[i];
          }
          const double n = std::sqrt(n2);
          if (n <= s.radius) return std::vector<double>(y.begin(), y.end());
          std::vector<double> out(y.size());
          for (std::size_t i = 0; i < y.size(); ++i) out[i] = s.center[i] + d[i] * (s.radius / n);
          return out;
        } else if constexpr (std::is_same_v<S, Box>) {
          std::vector<double> out(y.begin(), y.end());
          for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::clamp(out[i], s.lo[i], s.hi[i]);
          return out;
        } else if constexpr (std::is_same_v<S, Halfspaces>) {
          // Dykstra's alternating projections
          const std::size_t m = s.normals.size();
          std::vector<double> x(y.begin(), y.end());
          std::vector<std::vector<double>> corr(m, std::vector<double>(y.size(), 0.0));
          for (int sweep = 0; sweep < 10000; ++sweep) {
            double moved = 0;
            for (std::size_t i = 0; i < m; ++i) {
              std::vector<double> z(x.size());
              for (std::size_t k = 0; k < x.size(); ++k) z[k] = x[k] + corr[i][k];
              std::vector<double> nx = project_halfspace(z, s.normals[i], s.offsets[i]);
              for (std::size_t k = 0; k < x.size(); ++k) {
                corr[i][k] = z[k] - nx[k];
                moved += std::fabs(nx[k] - x[k]);
                x[k] = nx[k];
              }
            }
            if (moved < 1e-12) break;
          }
          return x;
        } else {
          throw std::invalid_argument("project: unsupported for basic sublevel sets (no projection oracle)");
        }
      },
      X);
}

double radius_bound(const ConvexSet& X) {
  return std::visit(
      [](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Ball>) {
          return norm2(s.center) + s.radius;
        } else if constexpr (std::is_same_v<S, Box>) {
          double acc = 0;
          for (std::size_t i = 0; i < s.lo.size(); ++i)
            acc += std::max(s.lo[i] * s.lo[i], s.hi[i] * s.hi[i]);
          return std::sqrt(acc);
        } else if constexpr (std::is_same_v<S, Halfspaces>) {
          if (has_recession_direction(s)) throw std::invalid_argument("radius_bound: unbounded halfspace intersection");
          auto verts = polytope_vertices(s);
          if (verts.empty()) throw std::invalid_argument("radius_bound: no vertices found");
          double best = 0;
          for (const auto& v : verts) best = std::max(best, norm2(v));
          return best;
        } else {
          return s.bounding_radius;
        }
      },
      X);
}

Rat radius_bound_rat(const ConvexSet& X) {
  return std::visit(
      [&](const auto& s) -> Rat {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Ball>) {
          Rat c2(0);
          for (double v : s.center) c2 += rat_from_double(v) * rat_from_double(v);
          return sqrt_upper(c2) + rat_from_double(s.radius);
        } else if constexpr (std::is_same_v<S, Box>) {
          Rat acc(0);
          for (std::size_t i = 0; i < s.lo.size(); ++i) {
            Rat l = rat_from_double(s.lo[i]), h = rat_from_double(s.hi[i]);
            acc += std::max(l * l, h * h);
          }
          return sqrt_upper(acc);
        } else {
          // float-derived bound, bumped to stay an over-estimate
          const double r = radius_bound(X);
          return rat_from_double(r) * make_rat((Int(1) << 30) + 1, Int(1) << 30);
        }
      },
      X);
}

Lattice bounding_lattice(const ConvexSet& X, double mesh) {
  if (mesh <= 0) throw std::invalid_argument("bounding_lattice: mesh must be positive");
  const int n = set_dim(X);
  std::vector<double> lo(n), hi(n);
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Ball>) {
          for (int i = 0; i < n; ++i) {
            lo[i] = s.center[i] - s.radius;
            hi[i] = s.center[i] + s.radius;
          }
        } else if constexpr (std::is_same_v<S, Box>) {
          for (int i = 0; i < n; ++i) {
            lo[i] = s.lo[i];
            hi[i] = s.hi[i];
          }
        } else if constexpr (std::is_same_v<S, Halfspaces>) {
          auto verts = polytope_vertices(s);
          if (verts.empty()) throw std::invalid_argument("bounding_lattice: no vertices found");
          for (int i = 0; i < n; ++i) {
            lo[i] = hi[i] = verts[0][(std::size_t)i];
            for (const auto& v : verts) {
              lo[i] = std::min(lo[i], v[(std::size_t)i]);
              hi[i] = std::max(hi[i], v[(std::size_t)i]);
            }
          }
        } else {
          for (int i = 0; i < n; ++i) {
            lo[i] = s.witness[i] - s.bounding_radius;
            hi[i] = s.witness[i] + s.bounding_radius;
          }
        }
      },
      X);
  Lattice L;
  L.lo = lo;
  L.step.resize(n);
  L.npts.resize(n);
  for (int i = 0; i < n; ++i) {
    const double range = hi[i] - lo[i];
    if (range <= 0) {
      L.step[i] = 1.0;
      L.npts[i] = 1;
      continue;
    }
    const auto cells = (std::int64_t)std::ceil(range / mesh - 1e-12);
    L.step[i] = range / (double)cells;
    L.npts[i] = cells + 1;
  }
  return L;
}

std::vector<std::vector<double>> grid_sample(const ConvexSet& X, double mesh) {
  const Lattice L = bounding_lattice(X, mesh);
  const int n = set_dim(X);
  std::vector<std::vector<double>> pts;
  std::vector<double> x(n);
  const std::int64_t total = L.total();
  for (std::int64_t i = 0; i < total; ++i) {
    L.point(i, x);
    if (contains(X, x, 1e-12)) pts.push_back(x);
  }
  if (pts.empty()) pts.push_back(set_witness(X));
  return pts;
}

std::vector<double> AffineMap::to_norm(std::span<const double> x) const {
  std::vector<double> u(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) u[i] = (x[i] - center[i]) / scale;
  return u;
}

std::vector<double> AffineMap::from_norm(std::span<const double> u) const {
  std::vector<double> x(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) x[i] = scale * u[i] + center[i];
  return x;
}

Normalized normalize_to_half_ball(const ConvexSet& X, const Polynomial<double>& f) {
  const int n = set_dim(X);
  if (f.nvars() != n) throw std::invalid_argument("normalize_to_half_ball: arity mismatch");
  if (std::holds_alternative<BasicSublevel>(X))
    throw std::invalid_argument("normalize_to_half_ball: basic sublevel sets unsupported");
  const std::vector<double> c = set_witness(X);
  // radius about c
  double Rc = 0;
  if (const Ball* b = std::get_if<Ball>(&X)) {
    Rc = b->radius;  // c is the center
  } else if (const Box* bx = std::get_if<Box>(&X)) {
    double acc = 0;
    for (int i = 0; i < n; ++i) {
      const double d = 0.5 * (bx->hi[i] - bx->lo[i]);
      acc += d * d;
    }
    Rc = std::sqrt(acc);
  } else {
    const Halfspaces& H = std::get<Halfspaces>(X);
    if (has_recession_direction(H))
      throw std::invalid_argument("normalize_to_half_ball: unbounded halfspace intersection");
    auto verts = polytope_vertices(H);
    if (verts.empty()) throw std::invalid_argument("normalize_to_half_ball: no vertices found");
    for (const auto& v : verts) {
      double d2 = 0;
      for (int i = 0; i < n; ++i) d2 += (v[(std::size_t)i] - c[(std::size_t)i]) * (v[(std::size_t)i] - c[(std::size_t)i]);
      Rc = std::max(Rc, std::sqrt(d2));
    }
  }
  if (Rc <= 0) throw std::invalid_argument("normalize_to_half_ball: degenerate set");

  AffineMap tau{c, 2.0 * Rc};
  ConvexSet Xn = std::visit(
      [&](const auto& s) -> ConvexSet {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Ball>) {
          std::vector<double> nc(n, 0.0);
          return Ball{nc, s.radius / tau.scale};
        } else if constexpr (std::is_same_v<S, Box>) {
          std::vector<double> lo(n), hi(n);
          for (int i = 0; i < n; ++i) {
            lo[i] = (s.lo[i] - c[(std::size_t)i]) / tau.scale;
            hi[i] = (s.hi[i] - c[(std::size_t)i]) / tau.scale;
          }
          return Box{lo, hi};
        } else if constexpr (std::is_same_v<S, Halfspaces>) {
          std::vector<std::vector<double>> normals = s.normals;
          std::vector<double> offsets = s.offsets;
          for (std::size_t i = 0; i < normals.size(); ++i) {
            offsets[i] -= dot(normals[i], c);
            for (auto& v : normals[i]) v *= tau.scale;
          }
          std::vector<double> w(n, 0.0);
          return Halfspaces{normals, offsets, w};
        } else {
          throw std::invalid_argument("normalize_to_half_ball: unsupported set");
        }
      },
      X);
  Polynomial<double> fn = f.compose_scale_shift(tau.scale, std::span<const double>(tau.center));
  return Normalized{tau, std::move(Xn), std::move(fn)};
}

}  // namespace polyconv
