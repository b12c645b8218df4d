#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "polyconv/line.hpp"
#include "polyconv/polynomial.hpp"
#include "test_util.hpp"

#include <array>

using namespace polyconv;

namespace {

const char* kMotzkin = "1 + x1^2*x2^2*(x1^2 + x2^2 - 3)";

template <class T>
T eval_at(const Polynomial<T>& p, std::initializer_list<T> xs) {
  std::vector<T> v(xs);
  return p.evaluate(std::span<const T>(v));
}

}  // namespace

TEST_CASE("parse: Motzkin polynomial expands to four terms") {
  auto p = parse_polynomial<Rat>(kMotzkin, 2);
  CHECK(p.terms().size() == 4);
  CHECK(p.degree() == 6);
  CHECK(p.coeff(Mono{4, 2}) == 1);
  CHECK(p.coeff(Mono{2, 4}) == 1);
  CHECK(p.coeff(Mono{2, 2}) == -3);
  CHECK(p.coeff(Mono{0, 0}) == 1);
}

TEST_CASE("parse: zero polynomial and hand expansions") {
  auto z = parse_polynomial<Rat>("0", 3);
  CHECK(z.is_zero());
  CHECK(z.degree() == -1);
  CHECK(z.terms().empty());

  auto q = parse_polynomial<Rat>("(x1 - 2)^2", 1);
  CHECK(q == parse_polynomial<Rat>("x1^2 - 4*x1 + 4", 1));
}

TEST_CASE("parse: rational and decimal coefficients, errors carry offsets") {
  auto p = parse_polynomial<Rat>("1/2*x1 + 0.25", 1);
  CHECK(p.coeff(Mono{1}) == make_rat(1, 2));
  CHECK(p.coeff(Mono{0}) == make_rat(1, 4));

  CHECK_THROWS_AS(parse_polynomial<Rat>("x3 + 1", 2), ParseError);
  CHECK_THROWS_AS(parse_polynomial<Rat>("1 + * 2", 1), ParseError);
  try {
    parse_polynomial<Rat>("x1 + x9^2", 2);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset == 6);
  }
}

TEST_CASE("evaluate: Motzkin vanishes at (1,1); origin gives the constant term") {
  auto p = parse_polynomial<Rat>(kMotzkin, 2);
  CHECK(eval_at<Rat>(p, {Rat(1), Rat(1)}) == 0);
  CHECK(eval_at<Rat>(p, {Rat(0), Rat(0)}) == 1);
  auto s = parse_polynomial<Rat>("x1^2 + x2^2", 2);
  CHECK(eval_at<Rat>(s, {Rat(3), Rat(4)}) == 25);
}

TEST_CASE("gradient and hessian of x1^2 + x2^2") {
  auto p = parse_polynomial<Rat>("x1^2 + x2^2", 2);
  auto g = p.gradient();
  CHECK(g[0] == parse_polynomial<Rat>("2*x1", 2));
  CHECK(g[1] == parse_polynomial<Rat>("2*x2", 2));
  auto H = p.hessian();
  CHECK(H[0][0] == Polynomial<Rat>::constant(2, Rat(2)));
  CHECK(H[0][1].is_zero());
  CHECK(H[1][1] == Polynomial<Rat>::constant(2, Rat(2)));
}

TEST_CASE("leading_form") {
  auto motz = parse_polynomial<Rat>(kMotzkin, 2);
  CHECK(motz.leading_form() == parse_polynomial<Rat>("x1^4*x2^2 + x1^2*x2^4", 2));
  auto c = parse_polynomial<Rat>("5", 2);
  CHECK(c.leading_form() == c);
  auto q = parse_polynomial<Rat>("x1^2 - x2", 2);
  CHECK(q.leading_form() == parse_polynomial<Rat>("x1^2", 2));
  CHECK_THROWS(parse_polynomial<Rat>("0", 2).leading_form());
}

TEST_CASE("l1 norm") {
  CHECK(l1_norm(parse_polynomial<Rat>(kMotzkin, 2)) == 6);
  CHECK(l1_norm(parse_polynomial<Rat>("0", 1)) == 0);
  CHECK(l1_norm(parse_polynomial<Rat>("2*x1 - 3", 1)) == 5);
}

TEST_CASE("bound_A and bound_B") {
  auto h = parse_polynomial<Rat>("1 + 2*x1", 1);
  CHECK(bound_A(h, Rat(2)) == 5);
  CHECK(bound_B(h, Rat(2)) == 2);
  auto c = Polynomial<Rat>::constant(1, Rat(-7));
  CHECK(bound_A(c, Rat(10)) == 7);
  CHECK(bound_B(c, Rat(10)) == 0);
  auto sq = parse_polynomial<Rat>("x1^2", 1);
  CHECK(bound_A(sq, Rat(3)) == 9);
  CHECK(bound_B(sq, Rat(3)) == 6);
  CHECK_THROWS(bound_A(sq, Rat(0)));
}

TEST_CASE("bound_D_uni") {
  auto f = parse_polynomial<Rat>("x1^2 - 6*x1 + 10", 1);
  CHECK(bound_D_uni(f, Rat(13)) == 32);
  CHECK(bound_D_uni(Polynomial<Rat>::constant(1, Rat(42)), Rat(5)) == 1);
  CHECK(bound_D_uni(parse_polynomial<Rat>("x1^2 + 1", 1), Rat(3)) == 6);
}

TEST_CASE("bound_DD: closed forms and over-estimation") {
  auto f = parse_polynomial<double>("x1^2 + x2^2", 2);
  CHECK(bound_DD(f, 1.0) == doctest::Approx(8.0));
  CHECK(bound_DD(Polynomial<double>::constant(2, 3.0), 1.0) == 1.0);
  // rational mode over-estimates the sqrt factor but stays close
  auto fr = parse_polynomial<Rat>("x1^2 + x2^2", 2);
  Rat dd = bound_DD(fr, Rat(1));
  CHECK(dd >= 8);
  CHECK(to_double(dd) == doctest::Approx(8.0));
}

TEST_CASE("bound_DD dominates sampled second line derivatives (Motzkin, R = 2)") {
  auto f = parse_polynomial<double>(kMotzkin, 2);
  const double D = bound_DD(f, 2.0);
  testing::Rng rng(20250810);
  for (int trial = 0; trial < 1000; ++trial) {
    const double th = rng.uniform(0.0, 2.0 * M_PI);
    std::vector<double> beta{std::cos(th), std::sin(th)};
    const double amag = rng.uniform(0.0, 1.9);
    std::vector<double> alpha{-std::sin(th) * amag, std::cos(th) * amag};
    auto L = make_line<double>(alpha, beta);
    auto q = restrict_to_line(f, L);
    auto q2 = q.derivative(0).derivative(0);
    // t range keeping gamma(t) inside B(2): (1+|a|^2)(1+t^2) <= 1+4
    const double tmax = std::sqrt(std::max(0.0, 5.0 / (1.0 + amag * amag) - 1.0));
    const double t = rng.uniform(-tmax, tmax);
    CHECK(std::fabs(eval_at<double>(q2, {t})) <= D * (1.0 + 1e-9));
  }
}

TEST_CASE("cauchy_K") {
  CHECK(cauchy_K(parse_polynomial<double>("x1^2", 1)) == 1.0);
  CHECK(cauchy_K(parse_polynomial<double>("x1^2 - 6*x1 + 10", 1)) == doctest::Approx(13.0));
  CHECK(cauchy_K(parse_polynomial<double>("2*x1 - 4", 1)) == doctest::Approx(5.0));
  CHECK_THROWS(cauchy_K(parse_polynomial<double>("7", 1)));
  // rational mode: an over-estimate within the snapping tolerance
  Rat K = cauchy_K(parse_polynomial<Rat>("x1^2 - 6*x1 + 10", 1));
  CHECK(K >= 13);
  CHECK(to_double(K) == doctest::Approx(13.0));
}

TEST_CASE("restrict_to_line: examples") {
  auto p = parse_polynomial<Rat>("x1^2 + x2^2", 2);
  auto L0 = make_line<Rat>({Rat(0), Rat(0)}, {Rat(1), Rat(0)});
  CHECK(restrict_to_line(p, L0) == parse_polynomial<Rat>("x1^2", 1));

  auto L1 = make_line<Rat>({Rat(0), Rat(1)}, {Rat(1), Rat(0)});
  CHECK(restrict_to_line(p, L1) == parse_polynomial<Rat>("2*x1^2 + 1", 1));

  auto one = Polynomial<Rat>::constant(2, Rat(1));
  CHECK(restrict_to_line(one, L1) == Polynomial<Rat>::constant(1, Rat(1)));
}

TEST_CASE("line identity 1+|gamma|^2 = (1+|alpha|^2)(1+t^2), exact in rational mode") {
  testing::Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = (int)rng.uniform_int(2, 4);
    std::vector<Rat> t((std::size_t)n - 1);
    for (auto& v : t) v = rng.uniform_rat(-2, 2);
    std::vector<Rat> beta = rational_unit_vector(t);
    std::vector<Rat> alpha((std::size_t)n);
    for (auto& v : alpha) v = rng.uniform_rat(-2, 2);
    auto L = make_line<Rat>(alpha, beta);
    REQUIRE(line_is_valid(L));

    Polynomial<Rat> p(n);
    p.add_term(Mono((std::size_t)n, 0), Rat(1));
    for (int i = 0; i < n; ++i) {
      Mono m((std::size_t)n, 0);
      m[(std::size_t)i] = 2;
      p.add_term(m, Rat(1));
    }
    auto q = restrict_to_line(p, L);

    Rat a2(0);
    for (const auto& v : L.alpha) a2 += v * v;
    Polynomial<Rat> expect(1);
    expect.add_term(Mono{0}, Rat(1) + a2);
    expect.add_term(Mono{2}, Rat(1) + a2);
    CHECK(q == expect);
  }
}

TEST_CASE("make_line validation") {
  CHECK_THROWS(make_line<Rat>({Rat(0)}, {Rat(2)}));  // |beta| != 1
  auto L = make_line<double>({1.0, 1.0}, {3.0, 0.0});
  CHECK(line_is_valid(L));
  CHECK(L.beta[0] == doctest::Approx(1.0));
  CHECK(L.alpha[0] == doctest::Approx(0.0));  // orthogonalized
  CHECK(L.alpha[1] == doctest::Approx(1.0));
}

TEST_CASE("property: parse . format is the identity (both scalar modes)") {
  testing::Rng rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = (int)rng.uniform_int(1, 4);
    auto pr = testing::random_polynomial<Rat>(rng, n, 6, 6);
    auto s = format_polynomial(pr);
    CHECK(parse_polynomial<Rat>(s, n) == pr);

    auto pd = testing::random_polynomial<double>(rng, n, 6, 6);
    auto sd = format_polynomial(pd);
    CHECK(parse_polynomial<double>(sd, n) == pd);
    // canonical: formatting is a fixed point
    CHECK(format_polynomial(parse_polynomial<double>(sd, n)) == sd);
  }
}

TEST_CASE("property: |p(x)| <= bound_A and |grad p(x)| <= bound_B on samples") {
  testing::Rng rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = (int)rng.uniform_int(1, 3);
    auto p = testing::random_polynomial<double>(rng, n, 5, 5);
    auto grads = p.gradient();
    for (int s = 0; s < 10; ++s) {
      std::vector<double> x((std::size_t)n);
      double nx = 0;
      for (auto& v : x) {
        v = rng.uniform(-2.0, 2.0);
        nx += v * v;
      }
      nx = std::sqrt(nx);
      if (nx < 1e-9) continue;
      const double A = bound_A(p, nx);
      CHECK(std::fabs(p.evaluate(std::span<const double>(x))) <= A * (1.0 + 1e-9) + 1e-12);
      double g2 = 0;
      for (const auto& g : grads) {
        const double gv = g.evaluate(std::span<const double>(x));
        g2 += gv * gv;
      }
      const double B = bound_B(p, nx);
      CHECK(std::sqrt(g2) <= B * (1.0 + 1e-9) + 1e-12);
    }
  }
}

TEST_CASE("compose_scale_shift: f(s*u + c)") {
  auto f = parse_polynomial<double>("x1^2 + 3*x1", 1);
  std::vector<double> c{1.0};
  auto g = f.compose_scale_shift(2.0, c);  // (2u+1)^2 + 3(2u+1) = 4u^2 + 10u + 4
  CHECK(g.coeff(Mono{2}) == doctest::Approx(4.0));
  CHECK(g.coeff(Mono{1}) == doctest::Approx(10.0));
  CHECK(g.coeff(Mono{0}) == doctest::Approx(4.0));
}

TEST_CASE("pow respects the term budget") {
  auto w = parse_polynomial<Rat>("1 + x1^2 + x2^2", 2);
  CHECK_THROWS_AS(w.pow(60, 100), TermBudgetExceeded);
  CHECK_NOTHROW(w.pow(5, 1000));
}
