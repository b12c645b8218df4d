// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion pins its tolerances in code.

#include "polyconv/convexify.hpp"
#include "polyconv/oracles.hpp"
#include "polyconv/proximity.hpp"
#include "polyconv/shift.hpp"
#include "test_util.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

using namespace polyconv;

namespace {

int g_failures = 0;

double run_criterion(int number, const std::string& label, const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("[%s] criterion %2d: %s (%.3f s)%s%s\n", ok ? "PASS" : "FAIL", number, label.c_str(), secs,
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
  return secs;
}

const char* kMotzkin = "1 + x1^2*x2^2*(x1^2 + x2^2 - 3)";

}  // namespace

int main() {
  // 1. exact formula reproduction: script_N(1,1,1) = 6 as an exact rational
  run_criterion(1, "script_N(1,1,1) == 6 exactly, in under a millisecond", [](std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    const Rat v = script_N(Rat(1), Rat(1), Rat(1));
    const double us =
        std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count();
    detail = "value " + rat_str(v) + ", " + double_str(us) + " us";
    return v == 6 && us < 1000.0;
  });

  // 2. Lojasiewicz exponent bound, exact integers at three arities
  run_criterion(2, "lojasiewicz_exponent_bound: 162 / 3 / 675 exactly", [](std::string&) {
    return lojasiewicz_exponent_bound(2, 2, 1) == 162 && lojasiewicz_exponent_bound(1, 1, 1) == 3 &&
           lojasiewicz_exponent_bound(3, 1, 2) == 675;
  });

  // 3. 20 seeded random univariate convexifications, every N Sturm-certified
  run_criterion(3, "20/20 random univariate exponents Sturm-certified (0 sampled fallbacks)",
                [](std::string& detail) {
                  testing::Rng rng(90210);
                  int certified = 0, fallbacks = 0, attempts = 0;
                  while (certified + fallbacks < 20 && attempts < 4000) {
                    ++attempts;
                    auto f = testing::random_polynomial<Rat>(rng, 1, 4, 5);
                    UPoly fu = UPoly::from(f);
                    if (fu.deg() < 1) continue;
                    const Rat a = rng.uniform_rat(-2, 1, 16);
                    const Rat b = a + rng.uniform_rat(1, 4, 16) / 2;
                    if (b > 2) continue;
                    if (!is_positive_on_interval(fu, a, b)) continue;
                    ConvexifyCertificate cert;
                    try {
                      cert = convexify_on_compact(f, make_box({to_double(a)}, {to_double(b)}));
                    } catch (const NotCertifiablyPositive&) {
                      continue;  // thin positive minimum below the margin: resample
                    }
                    // certification is re-done here, independent of the
                    // operation's internal check
                    UPoly cof = phi_ddot_cofactor(fu, Rat(cert.N));
                    if (is_positive_on_interval(cof, a, b))
                      ++certified;
                    else
                      ++fallbacks;
                  }
                  detail = std::to_string(certified) + " certified, " + std::to_string(fallbacks) +
                           " fallbacks, " + std::to_string(attempts) + " draws";
                  return certified == 20 && fallbacks == 0;
                });

  // 4. stabilization exponent growth for f_k = (x-k)^2 + 1 on [0,k]
  run_criterion(4, "min_convexifying_N nondecreasing over k in {2,4,8,16}, strictly larger at 16",
                [](std::string& detail) {
                  std::vector<int> ns;
                  for (int k : {2, 4, 8, 16}) {
                    UPoly f;
                    f.c = {Rat(k) * Rat(k) + 1, Rat(-2 * k), Rat(1)};
                    auto n = min_convexifying_N(f, Rat(0), Rat(k), 64);
                    if (!n) return false;
                    ns.push_back(*n);
                  }
                  detail = "N(k) = " + std::to_string(ns[0]) + ", " + std::to_string(ns[1]) + ", " +
                           std::to_string(ns[2]) + ", " + std::to_string(ns[3]);
                  for (std::size_t i = 1; i < ns.size(); ++i)
                    if (ns[i] < ns[i - 1]) return false;
                  return ns.back() > ns.front();
                });

  // 5. Motzkin leading form: witness, then certified-positive after the
  //    coercive augmentation
  run_criterion(5, "Motzkin leading form: witness; + (x1^2+x2^2)^4 becomes certified-positive",
                [](std::string& detail) {
                  auto motz = parse_polynomial<double>(kMotzkin, 2);
                  auto res = leading_form_positive(motz);
                  if (res.kind != LeadingFormResult::Kind::Witness) return false;
                  const double fd_at_witness =
                      motz.leading_form().evaluate(std::span<const double>(res.witness));
                  if (!(fd_at_witness <= 0.0)) return false;
                  auto aug = coercive_augment(motz, 1.0, 1.0, 8);
                  auto res2 = leading_form_positive(aug);
                  detail = "witness value " + double_str(fd_at_witness);
                  return res2.kind == LeadingFormResult::Kind::CertifiedPositive;
                });

  // 6. shift construction for f = x+2, g = 1-x^2, eps = 1/2, mu = 2
  run_criterion(6, "shift: (M,A,delta) == (3,2,1/144) exactly; range and sandwich hold on grids",
                [](std::string& detail) {
                  auto f = parse_polynomial<Rat>("x1 + 2", 1);
                  auto g = parse_polynomial<Rat>("1 - x1^2", 1);
                  ShiftSpec s = shift_params(f, {g}, Rat(1), make_rat(1, 2), StronglyConcaveMode{Rat(2)});
                  if (!(s.M == 3 && s.A == 2 && s.delta == make_rat(1, 144))) return false;
                  LazyShift h = build_shift(s);
                  const double mesh = 2e-3;  // >= 10^3 grid points on X = [-1,1]
                  auto X_grid = grid_sample(make_box({-1.0}, {1.0}), mesh);
                  auto ball_grid = grid_sample(make_ball({0.0}, 1.0), mesh);
                  if (X_grid.size() < 1000) return false;
                  ShiftReport rep = verify_shift(f, h, s.epsilon, X_grid, ball_grid, mesh);
                  detail = "N = " + s.N.get_str() + ", f*_grid = " + double_str(rep.f_star_grid) +
                           ", min_ball = " + double_str(rep.min_ball_grid);
                  return rep.range_ok && rep.dominance_ok && rep.sandwich_ok;
                });

  // 7. 1-d proximity convergence with per-step lemma checks
  run_criterion(
      7, "proximity 1-d: a* = -1/2 within 200 iterations, lemmas hold on every step",
      [](std::string& detail) {
        auto f = parse_polynomial<double>("x1 + 2", 1);
        auto tr = iterate(f, make_box({-0.5}, {0.5}), std::vector<double>{0.0});
        if (tr.status != ProxStatus::Converged) return false;
        if (tr.steps.size() > 200) return false;
        if (std::fabs(tr.iterates.back()[0] + 0.5) > 1e-3) return false;
        // first step: the root of 13x^2 + 84x + 1 in [-1/2, 1/2]
        const double root = (-84.0 + std::sqrt(84.0 * 84.0 - 52.0)) / 26.0;
        if (std::fabs(tr.iterates[1][0] - root) > 1e-6) return false;
        for (std::size_t k = 0; k + 1 < tr.values.size(); ++k)
          if (tr.steps[k] > 1e-8 && !(tr.values[k + 1] < tr.values[k])) return false;
        auto rep = verify_step_lemmas(tr, 1e-4);
        detail = std::to_string(tr.steps.size()) + " steps, max distance slack " +
                 double_str(rep.max_dist_slack) + ", min mu_hat " + double_str(rep.min_mu_hat);
        return rep.all_dist_pass && rep.all_descent_pass && rep.min_mu_hat >= 1e-12;
      });

  // 8. 2-d proximity convergence to the projected unconstrained minimizer
  run_criterion(8, "proximity 2-d: a* = (1,1)/(2 sqrt 2) within 1e-3, lower-critical gate passes",
                [](std::string& detail) {
                  auto f = parse_polynomial<double>("(x1 - 1)^2 + (x2 - 1)^2 + 1", 2);
                  ConvexSet X = make_ball({0.0, 0.0}, 0.5);
                  auto tr = iterate(f, X, std::vector<double>{0.0, 0.0});
                  if (tr.status != ProxStatus::Converged) return false;
                  const double target = 1.0 / (2.0 * std::sqrt(2.0));
                  const auto& a = tr.iterates.back();
                  detail = "a* = (" + double_str(a[0]) + ", " + double_str(a[1]) + "), " +
                           std::to_string(tr.steps.size()) + " steps";
                  if (std::fabs(a[0] - target) > 1e-3 || std::fabs(a[1] - target) > 1e-3) return false;
                  return check_lower_critical(f, X, a);
                });

  // 9. oracle agreement: Sturm vs sign scan; symbolic vs finite differences
  run_criterion(9, "oracles agree: 100 root counts, 50 gradient/Hessian checks at 1e-6",
                [](std::string& detail) {
                  testing::Rng rng(777);
                  int counted = 0;
                  while (counted < 100) {
                    auto p = testing::random_polynomial<Rat>(rng, 1, 8, 6, -9, 9);
                    UPoly u = UPoly::from(p);
                    if (u.deg() < 1) continue;
                    ++counted;
                    const Rat K = cauchy_K(p);
                    const int sturm = count_real_roots(u, -K, K);
                    const int scan =
                        oracles::sign_scan_roots(to_double_poly(p), -to_double(K), to_double(K));
                    if (sturm != scan) {
                      detail = "mismatch at draw " + std::to_string(counted);
                      return false;
                    }
                  }
                  for (int t = 0; t < 50; ++t) {
                    const int n = (int)rng.uniform_int(1, 4);
                    auto p = testing::random_polynomial<double>(rng, n, 6, 6);
                    auto grads = p.gradient();
                    auto hess = p.hessian();
                    std::vector<double> x((std::size_t)n);
                    for (auto& v : x) v = rng.uniform(-1.5, 1.5);
                    auto gf = oracles::fd_gradient(p, x);
                    auto Hf = oracles::fd_hessian(p, x);
                    for (int i = 0; i < n; ++i) {
                      const double gs = grads[(std::size_t)i].evaluate(std::span<const double>(x));
                      if (std::fabs(gf[(std::size_t)i] - gs) > 1e-6 * std::max(1.0, std::fabs(gs)))
                        return false;
                      for (int j = 0; j < n; ++j) {
                        const double hs =
                            hess[(std::size_t)i][(std::size_t)j].evaluate(std::span<const double>(x));
                        if (std::fabs(Hf[(std::size_t)i][(std::size_t)j] - hs) >
                            1e-5 * std::max(1.0, std::fabs(hs)))
                          return false;
                      }
                    }
                  }
                  return true;
                });

  // 10. out-of-scope items, stated explicitly
  std::printf(
      "[NOTE] criterion 10: not reproduced by design: the full l1-approximating sequence, "
      "Putinar/Schmudgen decompositions, Lasserre SDP value sequences, and the c/k^(1/d) "
      "convergence rate. The property suites above cover the constructive core instead.\n");

  std::printf(g_failures == 0 ? "acceptance: all criteria passed\n"
                              : "acceptance: %d criterion(s) FAILED\n",
              g_failures);
  return g_failures;
}
