#pragma once

#include "polyconv/polynomial.hpp"
#include "polyconv/psd.hpp"
#include "polyconv/sets.hpp"
#include "polyconv/sturm.hpp"

#include <functional>
#include <optional>

namespace polyconv {

// N(m, R, D) = max{ D/m + m/(16D), (1+R^2)D/(Rm) + 1, 4D^2/m^2 + 2,
//                   (1+R^2)D/(2m) }
template <class T>
T script_N(const T& m, const T& R, const T& D) {
  if (m <= T(0) || R <= T(0) || D <= T(0)) throw std::invalid_argument("script_N: arguments must be positive");
  const T w = T(1) + R * R;
  T t1 = D / m + m / (T(16) * D);
  T t2 = w * D / (R * m) + T(1);
  T t3 = T(4) * D * D / (m * m) + T(2);
  T t4 = w * D / (T(2) * m);
  T best = t1;
  if (t2 > best) best = t2;
  if (t3 > best) best = t3;
  if (t4 > best) best = t4;
  return best;
}

// (1 + |x - xi|^2)^N * f, expanded. Throws TermBudgetExceeded when the
// expansion would exceed the budget; use PhiN for the lazy route.
template <class T>
Polynomial<T> phi_N_expanded(const Polynomial<T>& f, std::uint32_t N, std::span<const T> xi,
                             std::size_t term_budget = 100000) {
  const int n = f.nvars();
  if (!xi.empty() && (int)xi.size() != n) throw std::invalid_argument("phi_N_expanded: xi dimension mismatch");
  Polynomial<T> w = Polynomial<T>::constant(n, T(1));
  for (int i = 0; i < n; ++i) {
    Polynomial<T> v = Polynomial<T>::variable(n, i);
    if (!xi.empty() && xi[i] != T(0)) v -= Polynomial<T>::constant(n, xi[i]);
    w += v * v;
  }
  return Polynomial<T>::mul(w.pow(N, term_budget), f, term_budget);
}

// Lazy phi_{N,xi}: value / gradient / Hessian through the product rule on
// w^N f with w = 1 + |x - xi|^2. Exponents may be astronomically large; the
// evaluation works in doubles and saturates honestly on overflow.
class PhiN {
 public:
  PhiN(Polynomial<double> f, Int N, std::vector<double> xi);

  int nvars() const { return f_.nvars(); }
  const Int& N() const { return N_; }
  const std::vector<double>& xi() const { return xi_; }
  const Polynomial<double>& f() const { return f_; }

  double value(std::span<const double> x) const;
  std::vector<double> gradient(std::span<const double> x) const;
  std::vector<std::vector<double>> hessian(std::span<const double> x) const;

 private:
  Polynomial<double> f_;
  std::vector<Polynomial<double>> grad_;
  std::vector<std::vector<Polynomial<double>>> hess_;
  Int N_;
  double Nd_;
  std::vector<double> xi_;
};

enum class CertMethod { UnivariateSturm, LineSampled, FormulaOnly };
const char* cert_method_name(CertMethod m);

struct ConvexifyCertificate {
  Int N;
  Rat m, R, D, script_N_value;
  std::vector<double> xi;
  CertMethod method = CertMethod::FormulaOnly;
  double mesh = 0;  // mesh used for the certified lower bound on f
};

struct ConvexifyOptions {
  double mesh = 0;  // 0: auto refinement until the margin is small vs the grid minimum
  std::int64_t max_points = 200'000'000;
  int max_refine = 24;
  bool verify = true;  // Sturm (n = 1) / sampled Hessians (n >= 2)
};

struct NotCertifiablyPositive : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Certified convexification exponent on a compact convex set: R from the
// set, D = DD(f, R), m a certified grid lower bound, N = floor(N(m,R,D)) + 1
// (R doubled when xi != 0).
ConvexifyCertificate convexify_on_compact(const Polynomial<Rat>& f, const ConvexSet& X,
                                          std::span<const double> xi = {},
                                          const ConvexifyOptions& opts = {});

// First grid point of X (enumeration order) whose Hessian is indefinite.
using HessianAt = std::function<std::vector<std::vector<double>>(std::span<const double>)>;
std::optional<std::vector<double>> falsify_convexity(const Polynomial<double>& p, const ConvexSet& X, double mesh);
std::optional<std::vector<double>> falsify_convexity(const PhiN& p, const ConvexSet& X, double mesh);
std::optional<std::vector<double>> falsify_convexity(int nvars, const HessianAt& hess, const ConvexSet& X,
                                                     double mesh);

struct LeadingFormResult {
  enum class Kind { CertifiedPositive, Witness, Inconclusive } kind;
  std::vector<double> witness;  // set when kind == Witness
  double min_sample = 0;
  double margin = 0;
  double mesh = 0;
};

// Positivity of the leading form on the unit sphere: angular grids with a
// Lipschitz margin for n <= 3; low-discrepancy sampling (witness or
// inconclusive only) for n >= 4.
LeadingFormResult leading_form_positive(const Polynomial<double>& f, double refine_floor = 1e-4);

// f + a|x|^d + b with d even, d > deg f: coercive with leading form a|x|^d.
template <class T>
Polynomial<T> coercive_augment(const Polynomial<T>& f, const T& a, const T& b, long d) {
  if (a <= T(0) || b <= T(0)) throw std::invalid_argument("coercive_augment: a, b must be positive");
  if (d <= f.degree() || d % 2 != 0 || d <= 0)
    throw std::invalid_argument("coercive_augment: d must be even and exceed deg f");
  const int n = f.nvars();
  Polynomial<T> r2(n);
  for (int i = 0; i < n; ++i) {
    Polynomial<T> v = Polynomial<T>::variable(n, i);
    r2 += v * v;
  }
  return f + a * r2.pow((std::uint32_t)(d / 2)) + Polynomial<T>::constant(n, b);
}

// Convert the coefficients (exact: doubles are dyadic rationals).
Polynomial<double> to_double_poly(const Polynomial<Rat>& p);
Polynomial<Rat> to_rat_poly(const Polynomial<double>& p);

}  // namespace polyconv
