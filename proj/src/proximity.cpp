#include "polyconv/proximity.hpp"

#include "polyconv/oracles.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

namespace polyconv {

const char* prox_status_name(ProxStatus s) {
  switch (s) {
    case ProxStatus::Converged: return "converged";
    case ProxStatus::MaxIterations: return "max-iterations";
    case ProxStatus::InnerFailure: return "inner-failure";
  }
  return "?";
}

namespace {

double norm(std::span<const double> x) {
  double s = 0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double dist(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

double min_hessian_eig(const PhiN& phi, std::span<const double> x) {
  const auto H = phi.hessian(x);
  const int n = (int)H.size();
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = H[(std::size_t)i][(std::size_t)j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

PreparedProblem prepare(const Polynomial<double>& f, const ConvexSet& X) {
  Normalized nm = normalize_to_half_ball(X, f);
  PreparedProblem prep;
  prep.tau = nm.tau;
  prep.X = std::move(nm.X);
  prep.f_norm = std::move(nm.f);

  // D bounds |f|, |(f.gamma)'| and |(f.gamma)''| on the normalized set;
  // A(f,1/2) >= sup |f| there, DD covers the directional derivatives.
  const double half = 0.5;
  double D = std::max(1.0, bound_DD(prep.f_norm, half));
  D = std::max(D, bound_A(prep.f_norm, half));
  prep.D = D;
  prep.c = 2.0 * D;
  prep.f_shifted = prep.f_norm + Polynomial<double>::constant(prep.f_norm.nvars(), prep.c);
  return prep;
}

InnerResult inner_argmin(const PhiN& phi, const ConvexSet& X, std::span<const double> start,
                         const ProximityConfig& cfg) {
  const int n = phi.nvars();
  if (!contains(X, start, 1e-8)) throw std::invalid_argument("inner_argmin: start point not in X");

  InnerResult res;
  std::vector<double> x(start.begin(), start.end());
  double fx = phi.value(x);
  double t = 1.0;
  double t_good = 0.0;  // largest Armijo-accepted scale
  const double armijo = 1e-4;

  const auto residual_at = [&](const std::vector<double>& p, const std::vector<double>& g) {
    std::vector<double> probe(p);
    for (int i = 0; i < n; ++i) probe[(std::size_t)i] -= g[(std::size_t)i];
    return dist(p, project(X, probe));
  };

  int it = 0;
  for (; it < cfg.max_inner; ++it) {
    std::vector<double> g = phi.gradient(x);
    res.residual = residual_at(x, g);
    res.iterations = it;
    if (res.residual <= cfg.tol_inner) {
      res.x = x;
      res.ok = true;
      return res;
    }

    // Armijo backtracking on the projected step
    bool moved = false;
    for (int bt = 0; bt < 80; ++bt) {
      std::vector<double> cand(x);
      for (int i = 0; i < n; ++i) cand[(std::size_t)i] -= t * g[(std::size_t)i];
      cand = project(X, cand);
      double decrease = 0;
      for (int i = 0; i < n; ++i) decrease += g[(std::size_t)i] * (x[(std::size_t)i] - cand[(std::size_t)i]);
      const double fc = phi.value(cand);
      if (decrease > 0 && fc <= fx - armijo * decrease && fc < fx) {
        x = std::move(cand);
        fx = fc;
        moved = true;
        t_good = std::max(t_good, t);
        t = std::min(t * 2.0, 1e8);
        break;
      }
      t *= 0.5;
      if (t < 1e-14) break;
    }
    if (moved) continue;

    // Objective progress is below double resolution; refine on the gradient
    // alone with a fixed step (strong convexity contracts the iterates).
    // On any non-improving stretch the step halves and the best point is
    // restored, so the phase is monotone in the best residual.
    double tf = (t_good > 0 ? std::min(t_good, 1.0) : 1.0) * 0.5;
    double best_res = res.residual;
    std::vector<double> best_x = x;
    int since_improve = 0;
    for (; it < cfg.max_inner; ++it) {
      std::vector<double> cand(x);
      for (int i = 0; i < n; ++i) cand[(std::size_t)i] -= tf * g[(std::size_t)i];
      cand = project(X, cand);
      x = std::move(cand);
      g = phi.gradient(x);
      res.residual = residual_at(x, g);
      res.iterations = it;
      if (res.residual <= cfg.tol_inner) {
        res.x = x;
        res.ok = true;
        return res;
      }
      if (res.residual < best_res) {
        if (res.residual < 0.9 * best_res) since_improve = 0;
        best_res = res.residual;
        best_x = x;
      } else if (res.residual > 4.0 * best_res || ++since_improve >= 16) {
        tf *= 0.5;
        since_improve = 0;
        x = best_x;
        g = phi.gradient(x);
        if (tf < 1e-15) break;  // at the float floor for this problem
      }
    }
    res.x = best_x;
    res.residual = best_res;
    res.ok = best_res <= cfg.tol_inner;
    return res;
  }
  res.x = x;
  res.ok = false;
  return res;
}

bool check_lower_critical(const Polynomial<double>& f, const ConvexSet& X, std::span<const double> a,
                          double tol) {
  const int n = f.nvars();
  if ((int)a.size() != n || set_dim(X) != n) throw std::invalid_argument("check_lower_critical: arity mismatch");
  if (!contains(X, a, 1e-8)) throw std::invalid_argument("check_lower_critical: point not in X");

  std::vector<double> g((std::size_t)n);
  {
    const auto grad = f.gradient();
    for (int i = 0; i < n; ++i) g[(std::size_t)i] = grad[(std::size_t)i].evaluate(a);
  }

  // sampled variational inequality over projected direction probes
  const double rho = std::max(1e-4, 0.02 * radius_bound(X));
  std::vector<std::vector<double>> dirs;
  if (n == 1) {
    dirs = {{1.0}, {-1.0}};
  } else if (n == 2) {
    for (int k = 0; k < 64; ++k) {
      const double th = 2.0 * M_PI * (double)k / 64.0;
      dirs.push_back({std::cos(th), std::sin(th)});
    }
  } else {
    for (int i = 0; i < n; ++i) {
      std::vector<double> d((std::size_t)n, 0.0);
      d[(std::size_t)i] = 1.0;
      dirs.push_back(d);
      d[(std::size_t)i] = -1.0;
      dirs.push_back(d);
    }
    std::uint64_t state = 0x243f6a8885a308d3ull;
    auto next01 = [&]() {
      state ^= state << 13;
      state ^= state >> 7;
      state ^= state << 17;
      return (double)(state >> 11) * 0x1.0p-53;
    };
    for (int k = 0; k < 128; ++k) {
      std::vector<double> d((std::size_t)n);
      double nn = 0;
      for (int i = 0; i < n; ++i) {
        d[(std::size_t)i] = 2.0 * next01() - 1.0;
        nn += d[(std::size_t)i] * d[(std::size_t)i];
      }
      if (nn < 1e-12) continue;
      nn = std::sqrt(nn);
      for (auto& v : d) v /= nn;
      dirs.push_back(std::move(d));
    }
  }

  bool sampled_ok = true;
  const bool projectable = !std::holds_alternative<BasicSublevel>(X);
  for (const auto& d : dirs) {
    std::vector<double> y(a.begin(), a.end());
    for (int i = 0; i < n; ++i) y[(std::size_t)i] += rho * d[(std::size_t)i];
    std::vector<double> x;
    if (projectable) {
      x = project(X, y);
    } else {
      x = contains(X, y, 0.0) ? y : std::vector<double>(a.begin(), a.end());
    }
    const double dxa = dist(x, a);
    if (dxa < 1e-14) continue;
    double ip = 0;
    for (int i = 0; i < n; ++i) ip += g[(std::size_t)i] * (x[(std::size_t)i] - a[(std::size_t)i]);
    if (ip < -tol * dxa) {
      sampled_ok = false;
      break;
    }
  }

  // closed-form normal-cone conditions where available; both tests must agree
  if (const Ball* b = std::get_if<Ball>(&X)) {
    std::vector<double> v((std::size_t)n);
    for (int i = 0; i < n; ++i) v[(std::size_t)i] = a[(std::size_t)i] - b->center[(std::size_t)i];
    const double r = norm(v);
    bool closed_ok;
    if (r < b->radius - 1e-9) {
      closed_ok = norm(g) <= tol;
    } else {
      double radial = 0;
      for (int i = 0; i < n; ++i) radial += g[(std::size_t)i] * v[(std::size_t)i] / r;
      double tang2 = 0;
      for (int i = 0; i < n; ++i) {
        const double ti = g[(std::size_t)i] - radial * v[(std::size_t)i] / r;
        tang2 += ti * ti;
      }
      closed_ok = radial <= tol && std::sqrt(tang2) <= tol;
    }
    return closed_ok && sampled_ok;
  }
  if (const Box* bx = std::get_if<Box>(&X)) {
    bool closed_ok = true;
    for (int i = 0; i < n; ++i) {
      const double gi = g[(std::size_t)i];
      const bool at_lo = a[(std::size_t)i] <= bx->lo[(std::size_t)i] + 1e-9;
      const bool at_hi = a[(std::size_t)i] >= bx->hi[(std::size_t)i] - 1e-9;
      if (at_lo && at_hi) continue;  // pinned coordinate
      if (at_lo) {
        if (gi < -tol) closed_ok = false;
      } else if (at_hi) {
        if (gi > tol) closed_ok = false;
      } else {
        if (std::fabs(gi) > tol) closed_ok = false;
      }
    }
    return closed_ok && sampled_ok;
  }
  return sampled_ok;
}

ProximityTrace iterate(const Polynomial<double>& f, const ConvexSet& X, std::span<const double> a0,
                       const ProximityConfig& cfg) {
  if (cfg.N < 1) throw std::invalid_argument("iterate: N must be >= 1");
  ProximityTrace tr;
  tr.prep = prepare(f, X);
  const int n = f.nvars();

  std::vector<double> u = tr.prep.tau.to_norm(a0);
  if (!contains(tr.prep.X, u, 1e-8)) throw std::invalid_argument("iterate: a0 not in X");

  const auto record = [&](const std::vector<double>& un) {
    tr.iterates_norm.push_back(un);
    tr.iterates.push_back(tr.prep.tau.from_norm(un));
    tr.values.push_back(tr.prep.f_shifted.evaluate(std::span<const double>(un)));
  };
  record(u);

  tr.status = ProxStatus::MaxIterations;
  for (int nu = 0; nu < cfg.max_outer; ++nu) {
    PhiN phi(tr.prep.f_shifted, Int(cfg.N), u);
    InnerResult inner = inner_argmin(phi, tr.prep.X, u, cfg);
    if (!inner.ok) {
      record(inner.x);
      tr.steps.push_back(dist(u, inner.x));
      tr.checks.emplace_back();  // keep per-step arrays aligned
      tr.status = ProxStatus::InnerFailure;
      return tr;
    }
    const std::vector<double> r = inner.x;
    const double s = dist(u, r);

    StepCheck chk;
    {
      double mn = std::numeric_limits<double>::infinity();
      const int samples = 9;
      std::vector<double> z((std::size_t)n);
      for (int k = 0; k < samples; ++k) {
        const double tpar = (double)k / (double)(samples - 1);
        for (int i = 0; i < n; ++i)
          z[(std::size_t)i] = u[(std::size_t)i] + tpar * (r[(std::size_t)i] - u[(std::size_t)i]);
        mn = std::min(mn, min_hessian_eig(phi, z));
      }
      chk.mu_hat = std::max(mn, cfg.mu_floor);
      tr.mu_est = std::min(tr.mu_est, chk.mu_hat);
      const double f_u = tr.values.back();
      const double f_r = tr.prep.f_shifted.evaluate(std::span<const double>(r));
      chk.descent_rhs = (f_u - 0.5 * chk.mu_hat * s * s) / std::pow(1.0 + s * s, (double)cfg.N);
      chk.descent_slack = chk.descent_rhs - f_r;
      chk.descent_pass = f_r <= chk.descent_rhs + 1e-9 * (1.0 + std::fabs(chk.descent_rhs));
    }
    tr.checks.push_back(chk);
    tr.steps.push_back(s);
    u = r;
    record(u);

    if (s <= cfg.tol_outer) {
      const std::vector<double> a_orig = tr.iterates.back();
      if (check_lower_critical(f, X, a_orig, cfg.tol_critical)) {
        tr.status = ProxStatus::Converged;
        tr.critical = true;
        return tr;
      }
      // step tolerance hit away from a critical point: keep iterating
    }
  }
  return tr;
}

StepLemmaReport verify_step_lemmas(ProximityTrace& trace, double grid_mesh) {
  StepLemmaReport rep;
  const auto& f = trace.prep.f_shifted;
  for (std::size_t k = 0; k < trace.steps.size() && k < trace.checks.size(); ++k) {
    StepCheck& chk = trace.checks[k];
    const double level = trace.values[k + 1];
    chk.dist_oracle =
        oracles::level_set_distance(f, trace.prep.X, trace.iterates_norm[k], level, grid_mesh);
    if (!std::isfinite(chk.dist_oracle)) {
      // The level band is empty at this mesh: the level sits at/below the
      // grid's value resolution of the minimum, i.e. the level set has
      // shrunk to (essentially) the next iterate itself, which attains the
      // level inside X. The identity then holds through that point.
      chk.dist_oracle = trace.steps[k];
    }
    chk.dist_slack = std::fabs(trace.steps[k] - chk.dist_oracle);
    chk.dist_pass = std::isfinite(chk.dist_oracle) && chk.dist_slack <= grid_mesh;
    ++rep.steps_checked;
    if (chk.dist_pass) ++rep.dist_passes;
    if (chk.descent_pass) ++rep.descent_passes;
    rep.max_dist_slack = std::max(rep.max_dist_slack, chk.dist_slack);
    rep.min_mu_hat = std::min(rep.min_mu_hat, chk.mu_hat);
  }
  rep.all_dist_pass = rep.dist_passes == rep.steps_checked;
  rep.all_descent_pass = rep.descent_passes == rep.steps_checked;
  return rep;
}

std::string trace_jsonl(const ProximityTrace& trace) {
  std::ostringstream os;
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    os << "{\"nu\":" << (k + 1) << ",\"a\":[";
    const auto& a = trace.iterates[k + 1];
    for (std::size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << "\"" << double_str(a[i]) << "\"";
    os << "],\"f\":\"" << double_str(trace.values[k + 1]) << "\",\"step\":\"" << double_str(trace.steps[k])
       << "\"";
    const StepCheck& chk = trace.checks[k];
    os << ",\"lemma1_slack\":";
    if (std::isnan(chk.dist_slack))
      os << "null";
    else
      os << "\"" << double_str(chk.dist_slack) << "\"";
    os << ",\"lemma2_pass\":" << (chk.descent_pass ? "true" : "false") << "}\n";
  }
  return os.str();
}

}  // namespace polyconv
