#include "polyconv/convexify.hpp"

#include "polyconv/grid_kernels.hpp"

#include <cmath>

namespace polyconv {

Polynomial<double> to_double_poly(const Polynomial<Rat>& p) {
  Polynomial<double> r(p.nvars());
  for (const auto& [m, c] : p.terms()) r.add_term(m, to_double(c));
  return r;
}

Polynomial<Rat> to_rat_poly(const Polynomial<double>& p) {
  Polynomial<Rat> r(p.nvars());
  for (const auto& [m, c] : p.terms()) r.add_term(m, rat_from_double(c));
  return r;
}

PhiN::PhiN(Polynomial<double> f, Int N, std::vector<double> xi)
    : f_(std::move(f)), N_(std::move(N)), xi_(std::move(xi)) {
  if (N_ < 0) throw std::invalid_argument("PhiN: N must be nonnegative");
  if (xi_.empty()) xi_.assign((std::size_t)f_.nvars(), 0.0);
  if ((int)xi_.size() != f_.nvars()) throw std::invalid_argument("PhiN: xi dimension mismatch");
  grad_ = f_.gradient();
  hess_ = f_.hessian();
  Nd_ = N_.get_d();
}

namespace {

double w_of(std::span<const double> x, std::span<const double> xi) {
  double w = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = x[i] - xi[i];
    w += v * v;
  }
  return w;
}

}  // namespace

double PhiN::value(std::span<const double> x) const {
  const double w = w_of(x, xi_);
  return std::pow(w, Nd_) * f_.evaluate(x);
}

std::vector<double> PhiN::gradient(std::span<const double> x) const {
  const int n = f_.nvars();
  const double w = w_of(x, xi_);
  const double wN = std::pow(w, Nd_);
  const double wN1 = std::pow(w, Nd_ - 1.0);
  const double fv = f_.evaluate(x);
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i)
    g[(std::size_t)i] = wN * grad_[(std::size_t)i].evaluate(x) + 2.0 * Nd_ * wN1 * (x[(std::size_t)i] - xi_[(std::size_t)i]) * fv;
  return g;
}

std::vector<std::vector<double>> PhiN::hessian(std::span<const double> x) const {
  const int n = f_.nvars();
  const double w = w_of(x, xi_);
  const double wN = std::pow(w, Nd_);
  const double wN1 = std::pow(w, Nd_ - 1.0);
  const double wN2 = std::pow(w, Nd_ - 2.0);
  const double fv = f_.evaluate(x);
  std::vector<double> gf(n), v(n);
  for (int i = 0; i < n; ++i) {
    gf[(std::size_t)i] = grad_[(std::size_t)i].evaluate(x);
    v[(std::size_t)i] = x[(std::size_t)i] - xi_[(std::size_t)i];
  }
  std::vector<std::vector<double>> H(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double h = wN * hess_[(std::size_t)i][(std::size_t)j].evaluate(x);
      h += 2.0 * Nd_ * wN1 * (v[(std::size_t)i] * gf[(std::size_t)j] + v[(std::size_t)j] * gf[(std::size_t)i]);
      h += 4.0 * Nd_ * (Nd_ - 1.0) * wN2 * v[(std::size_t)i] * v[(std::size_t)j] * fv;
      if (i == j) h += 2.0 * Nd_ * wN1 * fv;
      H[(std::size_t)i][(std::size_t)j] = H[(std::size_t)j][(std::size_t)i] = h;
    }
  }
  return H;
}

const char* cert_method_name(CertMethod m) {
  switch (m) {
    case CertMethod::UnivariateSturm: return "univariate-sturm";
    case CertMethod::LineSampled: return "line-sampled";
    case CertMethod::FormulaOnly: return "formula-only";
  }
  return "?";
}

namespace {

bool set_is_degenerate(const ConvexSet& X) {
  if (const Box* b = std::get_if<Box>(&X)) {
    for (std::size_t i = 0; i < b->lo.size(); ++i)
      if (b->hi[i] > b->lo[i]) return false;
    return true;
  }
  if (std::holds_alternative<Ball>(X)) return false;  // radius > 0 by construction
  if (const Halfspaces* h = std::get_if<Halfspaces>(&X)) {
    auto pts = grid_sample(*h, radius_bound(*h) / 8 + 1e-30);
    for (std::size_t i = 1; i < pts.size(); ++i)
      if (pts[i] != pts[0]) return false;
    return pts.size() > 1 ? false : true;
  }
  return false;
}

struct CertifiedMin {
  double grid_min;
  double margin;
  double mesh;
};

// Certified lower bound of f over X: lattice scan in doubles plus a
// Lipschitz margin over the covering radius and a float-error allowance.
// Flat term table: allocation-free evaluation inside the scan loops.
struct CompiledPoly {
  int n = 0;
  std::vector<double> coef;
  std::vector<std::uint32_t> exps;  // terms x n

  explicit CompiledPoly(const Polynomial<double>& p) : n(p.nvars()) {
    for (const auto& [m, c] : p.terms()) {
      coef.push_back(c);
      exps.insert(exps.end(), m.begin(), m.end());
    }
  }
  double eval(const double* x) const {
    double acc = 0;
    const std::uint32_t* e = exps.data();
    for (std::size_t t = 0; t < coef.size(); ++t, e += n) {
      double v = coef[t];
      for (int i = 0; i < n; ++i)
        for (std::uint32_t k = e[i]; k; --k) v *= x[i];
      acc += v;
    }
    return acc;
  }
};

// Membership test without the per-point variant dispatch.
std::function<bool(const double*)> membership_fn(const ConvexSet& X, double tol) {
  const int n = set_dim(X);
  if (const Ball* b = std::get_if<Ball>(&X)) {
    const double r2 = (b->radius + tol) * (b->radius + tol);
    const std::vector<double> c = b->center;
    return [n, r2, c](const double* x) {
      double d2 = 0;
      for (int i = 0; i < n; ++i) d2 += (x[i] - c[(std::size_t)i]) * (x[i] - c[(std::size_t)i]);
      return d2 <= r2;
    };
  }
  return [X, tol, n](const double* x) { return contains(X, std::span<const double>(x, (std::size_t)n), tol); };
}

CertifiedMin certified_lower_bound(const Polynomial<Rat>& f, const ConvexSet& X, const Rat& R,
                                   const ConvexifyOptions& opts) {
  const int n = set_dim(X);
  if (n > 12) throw std::invalid_argument("certified_lower_bound: dimension too large for grid scans");
  const CompiledPoly fd(to_double_poly(f));
  const double Bd = to_double(bound_B(f, R));
  const double eval_err = f.degree() <= 0 ? 0.0 : to_double(bound_A(f, R)) * 1e-13 + 1e-300;
  const double diam = 2.0 * to_double(R);
  const double sqrt_n = std::sqrt((double)n);
  const auto member = membership_fn(X, 1e-12);

  auto scan = [&](double mesh) -> CertifiedMin {
    const Lattice L = bounding_lattice(X, mesh);
    double max_step = 0;
    for (double s : L.step) max_step = std::max(max_step, s);
    const auto value_at = [&](std::int64_t i) {
      double x[12];
      L.point(i, std::span<double>(x, (std::size_t)n));
      if (!member(x)) return std::numeric_limits<double>::infinity();
      return fd.eval(x);
    };
    const ScanResult r = scan_min(L.total(), value_at);
    return {r.value, Bd * sqrt_n * max_step + eval_err, max_step};
  };

  if (opts.mesh > 0) return scan(opts.mesh);

  CertifiedMin best{std::numeric_limits<double>::infinity(), 0, 0};
  double mesh = diam / 16.0;
  for (int k = 0; k <= opts.max_refine; ++k) {
    const double per_dim = std::ceil(diam / mesh) + 1.0;
    const double pts_est = std::pow(per_dim, (double)n);  // saturation-safe size estimate
    if (k > 0 && pts_est > (double)opts.max_points) break;
    best = scan(mesh);
    if (std::isfinite(best.grid_min) && best.grid_min - best.margin > 0 &&
        best.margin <= best.grid_min / 512.0)
      break;
    mesh /= 2.0;
  }
  return best;
}

std::pair<Rat, Rat> interval_of_1d(const ConvexSet& X) {
  if (const Box* b = std::get_if<Box>(&X)) return {rat_from_double(b->lo[0]), rat_from_double(b->hi[0])};
  if (const Ball* b = std::get_if<Ball>(&X))
    return {rat_from_double(b->center[0] - b->radius), rat_from_double(b->center[0] + b->radius)};
  if (const Halfspaces* h = std::get_if<Halfspaces>(&X)) {
    // a*x <= b is an exact one-sided bound; intersect them all
    bool has_lo = false, has_hi = false;
    Rat lo(0), hi(0);
    for (std::size_t i = 0; i < h->normals.size(); ++i) {
      const double a = h->normals[i][0];
      if (a == 0.0) continue;
      const Rat bound = rat_from_double(h->offsets[i]) / rat_from_double(a);
      if (a > 0) {
        if (!has_hi || bound < hi) hi = bound;
        has_hi = true;
      } else {
        if (!has_lo || bound > lo) lo = bound;
        has_lo = true;
      }
    }
    if (!has_lo || !has_hi || lo > hi)
      throw std::invalid_argument("convexify_on_compact: halfspace set is not a bounded interval");
    return {lo, hi};
  }
  throw std::invalid_argument("convexify_on_compact: 1-d certification needs a ball, box, or halfspace set");
}

}  // namespace

ConvexifyCertificate convexify_on_compact(const Polynomial<Rat>& f, const ConvexSet& X,
                                          std::span<const double> xi, const ConvexifyOptions& opts) {
  const int n = set_dim(X);
  if (f.nvars() != n) throw std::invalid_argument("convexify_on_compact: arity mismatch");
  if (!xi.empty() && (int)xi.size() != n) throw std::invalid_argument("convexify_on_compact: xi dimension mismatch");
  if (set_is_degenerate(X)) throw std::invalid_argument("convexify_on_compact: X is a single point");

  bool xi_nonzero = false;
  for (double v : xi)
    if (v != 0.0) xi_nonzero = true;

  const Rat R = radius_bound_rat(X);
  const CertifiedMin cm = certified_lower_bound(f, X, R, opts);
  if (!std::isfinite(cm.grid_min) || cm.grid_min - cm.margin <= 0)
    throw NotCertifiablyPositive("convexify_on_compact: could not certify f > 0 on X (grid min " +
                                 double_str(cm.grid_min) + ", margin " + double_str(cm.margin) + ")");
  const Rat m = rat_from_double(cm.grid_min) - rat_from_double(cm.margin);
  const Rat D = bound_DD(f, R);
  const Rat R_eff = xi_nonzero ? Rat(2) * R : R;
  const Rat SN = script_N(m, R_eff, D);
  const Int N = floor_rat(SN) + 1;

  ConvexifyCertificate cert;
  cert.N = N;
  cert.m = m;
  cert.R = R;
  cert.D = D;
  cert.script_N_value = SN;
  cert.xi.assign(xi.begin(), xi.end());
  cert.mesh = cm.mesh;
  cert.method = CertMethod::FormulaOnly;

  if (!opts.verify) return cert;

  if (n == 1) {
    auto [a, b] = interval_of_1d(X);
    const Rat xr = xi.empty() ? Rat(0) : rat_from_double(xi[0]);
    UPoly cof = phi_ddot_cofactor(UPoly::from(f), Rat(N), xr);
    if (!is_positive_on_interval(cof, a, b))
      throw std::logic_error("convexify_on_compact: Sturm certification failed (internal)");
    cert.method = CertMethod::UnivariateSturm;
    return cert;
  }

  // sampled verification: Hessians of phi_N at grid points must not be
  // indefinite; skipped when w^N overflows doubles
  const double logw = std::log1p(4.0 * to_double(R) * to_double(R));
  if (N.get_d() * logw < 600.0) {
    PhiN phi(to_double_poly(f), N, std::vector<double>(xi.begin(), xi.end()));
    const double mesh = to_double(R) / 8.0;
    if (auto bad = falsify_convexity(phi, X, mesh))
      throw std::logic_error("convexify_on_compact: sampled Hessian check failed (internal)");
    cert.method = CertMethod::LineSampled;
  }
  return cert;
}

std::optional<std::vector<double>> falsify_convexity(int nvars, const HessianAt& hess, const ConvexSet& X,
                                                     double mesh) {
  if (set_dim(X) != nvars) throw std::invalid_argument("falsify_convexity: arity mismatch");
  const Lattice L = bounding_lattice(X, mesh);
  const auto bad_at = [&](std::int64_t i) {
    thread_local std::vector<double> x;
    x.resize((std::size_t)nvars);
    L.point(i, x);
    if (!contains(X, x, 1e-12)) return false;
    return sylvester_psd(hess(std::span<const double>(x))) == PsdClass::Indefinite;
  };
  const std::int64_t idx = find_first(L.total(), bad_at);
  if (idx < 0) return std::nullopt;
  std::vector<double> x((std::size_t)nvars);
  L.point(idx, x);
  return x;
}

std::optional<std::vector<double>> falsify_convexity(const Polynomial<double>& p, const ConvexSet& X, double mesh) {
  auto H = p.hessian();
  const int n = p.nvars();
  HessianAt h = [H = std::move(H), n](std::span<const double> x) {
    std::vector<std::vector<double>> M((std::size_t)n, std::vector<double>((std::size_t)n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) M[(std::size_t)i][(std::size_t)j] = H[(std::size_t)i][(std::size_t)j].evaluate(x);
    return M;
  };
  return falsify_convexity(n, h, X, mesh);
}

std::optional<std::vector<double>> falsify_convexity(const PhiN& p, const ConvexSet& X, double mesh) {
  HessianAt h = [&p](std::span<const double> x) { return p.hessian(x); };
  return falsify_convexity(p.nvars(), h, X, mesh);
}

LeadingFormResult leading_form_positive(const Polynomial<double>& f, double refine_floor) {
  if (f.is_zero()) throw std::invalid_argument("leading_form_positive: zero polynomial");
  const Polynomial<double> fd = f.leading_form();
  const int n = f.nvars();
  const double B1 = bound_B(fd, 1.0);

  LeadingFormResult res;
  res.kind = LeadingFormResult::Kind::Inconclusive;

  auto try_samples = [&](const std::vector<std::vector<double>>& dirs, double cover) -> bool {
    double mn = std::numeric_limits<double>::infinity();
    for (const auto& d : dirs) {
      const double v = fd.evaluate(std::span<const double>(d));
      if (v <= 0) {
        res.kind = LeadingFormResult::Kind::Witness;
        res.witness = d;
        res.min_sample = v;
        res.mesh = cover;
        return true;
      }
      mn = std::min(mn, v);
    }
    res.min_sample = mn;
    res.margin = B1 * cover;
    res.mesh = cover;
    if (cover > 0 && mn > res.margin) {
      res.kind = LeadingFormResult::Kind::CertifiedPositive;
      return true;
    }
    return false;
  };

  if (n == 1) {
    std::vector<std::vector<double>> dirs{{1.0}, {-1.0}};
    double mn = std::numeric_limits<double>::infinity();
    for (const auto& d : dirs) {
      const double v = fd.evaluate(std::span<const double>(d));
      if (v <= 0) {
        res.kind = LeadingFormResult::Kind::Witness;
        res.witness = d;
        res.min_sample = v;
        return res;
      }
      mn = std::min(mn, v);
    }
    res.kind = LeadingFormResult::Kind::CertifiedPositive;
    res.min_sample = mn;
    return res;
  }

  if (n == 2) {
    for (int K = 64; 2.0 * M_PI / K >= refine_floor; K *= 2) {
      std::vector<std::vector<double>> dirs;
      dirs.reserve((std::size_t)K);
      for (int k = 0; k < K; ++k) {
        const double th = 2.0 * M_PI * (double)k / (double)K;
        dirs.push_back({std::cos(th), std::sin(th)});
      }
      if (try_samples(dirs, 2.0 * M_PI / K)) return res;
    }
    return res;
  }

  if (n == 3) {
    for (int Kt = 32; M_PI / Kt >= refine_floor && Kt <= 2048; Kt *= 2) {
      std::vector<std::vector<double>> dirs;
      for (int i = 0; i <= Kt; ++i) {
        const double th = M_PI * (double)i / (double)Kt;
        const int Kp = 2 * Kt;
        for (int j = 0; j < Kp; ++j) {
          const double ph = 2.0 * M_PI * (double)j / (double)Kp;
          dirs.push_back({std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)});
        }
      }
      if (try_samples(dirs, M_PI / Kt)) return res;
    }
    return res;
  }

  // n >= 4: deterministic low-discrepancy directions; witness hunting only,
  // an honest certificate would need a covering bound
  auto halton = [](std::int64_t i, int base) {
    double f01 = 1.0, r = 0.0;
    while (i > 0) {
      f01 /= base;
      r += f01 * (double)(i % base);
      i /= base;
    }
    return r;
  };
  const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  std::vector<std::vector<double>> dirs;
  for (std::int64_t i = 1; i <= 65536; ++i) {
    std::vector<double> d((std::size_t)n);
    double nn = 0;
    for (int k = 0; k < n; ++k) {
      // inverse normal via Box-Muller on Halton pairs would be cleaner;
      // uniform cube directions are adequate for witness hunting
      d[(std::size_t)k] = 2.0 * halton(i, primes[k % 12]) - 1.0;
      nn += d[(std::size_t)k] * d[(std::size_t)k];
    }
    if (nn < 1e-12) continue;
    nn = std::sqrt(nn);
    for (auto& v : d) v /= nn;
    dirs.push_back(std::move(d));
  }
  try_samples(dirs, 0.0);  // cover 0: can never certify
  return res;
}

}  // namespace polyconv
