#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "polyconv/convexify.hpp"
#include "polyconv/grid_kernels.hpp"
#include "polyconv/oracles.hpp"
#include "polyconv/sturm.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace polyconv;

namespace {
const char* kMotzkin = "1 + x1^2*x2^2*(x1^2 + x2^2 - 3)";
}

TEST_CASE("grid_min: Motzkin on [-2,2]^2 finds the zeros near (±1, ±1)") {
  auto f = parse_polynomial<double>(kMotzkin, 2);
  auto rep = oracles::grid_min(f, make_box({-2.0, -2.0}, {2.0, 2.0}), 1e-2);
  CHECK(rep.min_value >= 0.0);       // Motzkin is nonnegative
  CHECK(rep.min_value < 1e-3);
  CHECK(std::fabs(std::fabs(rep.argmin[0]) - 1.0) < 0.02);
  CHECK(std::fabs(std::fabs(rep.argmin[1]) - 1.0) < 0.02);
}

TEST_CASE("grid_min: constants and the boundary minimum of x + 2") {
  auto c = Polynomial<double>::constant(2, 7.5);
  auto rc = oracles::grid_min(c, make_ball({0.0, 0.0}, 1.0), 0.3);
  CHECK(rc.min_value == 7.5);

  auto f = parse_polynomial<double>("x1 + 2", 1);
  auto r = oracles::grid_min(f, make_box({-0.5}, {0.5}), 1e-3);
  CHECK(r.min_value == doctest::Approx(1.5));
  CHECK(r.argmin[0] == doctest::Approx(-0.5));
}

TEST_CASE("fd oracles: quadratic near-exact, constants zero") {
  auto q = parse_polynomial<double>("x1^2 + 3*x1*x2 + x2^2", 2);
  std::vector<double> x{0.7, -0.3};
  auto g = oracles::fd_gradient(q, x);
  CHECK(g[0] == doctest::Approx(2 * 0.7 + 3 * -0.3).epsilon(1e-9));
  CHECK(g[1] == doctest::Approx(3 * 0.7 + 2 * -0.3).epsilon(1e-9));
  auto H = oracles::fd_hessian(q, x);
  CHECK(H[0][0] == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(H[0][1] == doctest::Approx(3.0).epsilon(1e-6));

  auto c = Polynomial<double>::constant(2, 4.0);
  auto gc = oracles::fd_gradient(c, x);
  CHECK(gc[0] == 0.0);
  CHECK(gc[1] == 0.0);
}

TEST_CASE("fd oracle matches the symbolic Hessian of the Motzkin polynomial at (1,1)") {
  auto f = parse_polynomial<double>(kMotzkin, 2);
  std::vector<double> x{1.0, 1.0};
  auto Hs = f.hessian();
  auto Hf = oracles::fd_hessian(f, x);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double sym = Hs[(std::size_t)i][(std::size_t)j].evaluate(std::span<const double>(x));
      CHECK(Hf[(std::size_t)i][(std::size_t)j] == doctest::Approx(sym).epsilon(1e-6));
    }
}

TEST_CASE("property: symbolic derivatives vs central differences, rel err < 1e-6") {
  testing::Rng rng(4242);
  for (int t = 0; t < 50; ++t) {
    const int n = (int)rng.uniform_int(1, 4);
    auto p = testing::random_polynomial<double>(rng, n, 6, 6);
    auto grads = p.gradient();
    for (int s = 0; s < 10; ++s) {
      std::vector<double> x((std::size_t)n);
      for (auto& v : x) v = rng.uniform(-1.5, 1.5);
      auto gf = oracles::fd_gradient(p, x);
      for (int i = 0; i < n; ++i) {
        const double sym = grads[(std::size_t)i].evaluate(std::span<const double>(x));
        const double err = std::fabs(gf[(std::size_t)i] - sym);
        CHECK(err <= 1e-6 * std::max(1.0, std::fabs(sym)));
      }
    }
  }
}

TEST_CASE("sign_scan_roots: examples") {
  auto p = parse_polynomial<double>("x1^2 - 1", 1);
  CHECK(oracles::sign_scan_roots(p, 0.0, 2.0) == 1);
  auto q = parse_polynomial<double>("x1^2 + 1", 1);
  CHECK(oracles::sign_scan_roots(q, -10.0, 10.0) == 0);
  auto r = parse_polynomial<double>("x1*(x1 - 1)*(x1 + 1)", 1);
  CHECK(oracles::sign_scan_roots(r, -2.0, 2.0) == 3);
}

TEST_CASE("property: sign scan agrees with the Sturm count on random polynomials") {
  testing::Rng rng(1001);
  int done = 0;
  while (done < 100) {
    auto pr = testing::random_polynomial<Rat>(rng, 1, 8, 6, -9, 9);
    UPoly u = UPoly::from(pr);
    if (u.deg() < 1) continue;
    ++done;
    const Rat K = cauchy_K(pr);
    const double Kd = to_double(K);
    const int sturm = count_real_roots(u, -K, K);
    auto pd = to_double_poly(pr);
    const int scan = oracles::sign_scan_roots(pd, -Kd, Kd);
    CHECK(sturm == scan);
  }
}

TEST_CASE("level_set_distance: linear level sets") {
  auto f = parse_polynomial<double>("x1", 1);
  ConvexSet X = make_box({-1.0}, {1.0});
  std::vector<double> from{0.5};
  const double d = oracles::level_set_distance(f, X, from, 0.0, 1e-3);
  CHECK(d == doctest::Approx(0.5).epsilon(1e-3));
  // level far outside the range: empty band
  CHECK(oracles::level_set_distance(f, X, from, 10.0, 1e-3) ==
        std::numeric_limits<double>::infinity());
}

TEST_CASE("parallel scan kernels match their serial references") {
  testing::Rng rng(512);
  std::vector<double> data(20000);
  for (auto& v : data) v = rng.uniform(-100.0, 100.0);
  // plant duplicated minima to exercise the smallest-index tie-break
  data[7777] = data[333] = -250.0;
  auto at = [&](std::int64_t i) { return data[(std::size_t)i]; };
  const auto ms = scan_min_serial((std::int64_t)data.size(), at);
  const auto mp = scan_min_parallel((std::int64_t)data.size(), at);
  CHECK(ms.value == mp.value);
  CHECK(ms.index == mp.index);
  CHECK(ms.index == 333);

  const auto xs = scan_max_serial((std::int64_t)data.size(), at);
  const auto xp = scan_max_parallel((std::int64_t)data.size(), at);
  CHECK(xs.value == xp.value);
  CHECK(xs.index == xp.index);

  auto pred = [&](std::int64_t i) { return data[(std::size_t)i] < -200.0; };
  CHECK(find_first_serial((std::int64_t)data.size(), pred) ==
        find_first_parallel((std::int64_t)data.size(), pred));
  CHECK(count_where_serial((std::int64_t)data.size(), pred) ==
        count_where_parallel((std::int64_t)data.size(), pred));
}

TEST_CASE("oracle_eval is an independent evaluator with matching values") {
  testing::Rng rng(2);
  for (int t = 0; t < 30; ++t) {
    const int n = (int)rng.uniform_int(1, 3);
    auto p = testing::random_polynomial<double>(rng, n, 5, 5);
    std::vector<double> x((std::size_t)n);
    for (auto& v : x) v = rng.uniform(-2.0, 2.0);
    CHECK(oracles::oracle_eval(p, x) ==
          doctest::Approx(p.evaluate(std::span<const double>(x))).epsilon(1e-12));
  }
}
