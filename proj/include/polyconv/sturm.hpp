#pragma once

#include "polyconv/polynomial.hpp"

#include <optional>

namespace polyconv {

// Dense univariate polynomial over exact rationals, ascending coefficients.
// Invariant: empty (zero polynomial) or nonzero leading coefficient.
struct UPoly {
  std::vector<Rat> c;

  UPoly() = default;
  explicit UPoly(std::vector<Rat> coeffs) : c(std::move(coeffs)) { trim(); }

  static UPoly from(const Polynomial<Rat>& p);
  Polynomial<Rat> to_polynomial() const;

  long deg() const { return (long)c.size() - 1; }
  bool is_zero() const { return c.empty(); }
  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }
  Rat lead() const { return c.empty() ? Rat(0) : c.back(); }
};

UPoly operator+(const UPoly& a, const UPoly& b);
UPoly operator-(const UPoly& a, const UPoly& b);
UPoly operator*(const UPoly& a, const UPoly& b);
UPoly operator*(const UPoly& a, const Rat& s);
UPoly operator-(const UPoly& a);
bool operator==(const UPoly& a, const UPoly& b);

Rat ueval(const UPoly& p, const Rat& x);
int usign_at(const UPoly& p, const Rat& x);
UPoly uderiv(const UPoly& p);
// Euclidean division over Q; b nonzero.
std::pair<UPoly, UPoly> udivmod(const UPoly& a, const UPoly& b);
// Monic gcd.
UPoly ugcd(UPoly a, UPoly b);
// p / gcd(p, p'): same distinct roots, all simple.
UPoly squarefree_part(const UPoly& p);
// Yun decomposition: result[k] collects the factors of multiplicity k+1.
std::vector<UPoly> squarefree_decomposition(const UPoly& p);

// Chain: input made square-free, its derivative, then negated remainders
// down to a nonzero constant.
struct SturmSequence {
  std::vector<UPoly> chain;
};

SturmSequence sturm_chain(const UPoly& p);
int sign_variations_at(const SturmSequence& s, const Rat& x);
int sign_variations_at_neg_inf(const SturmSequence& s);
int sign_variations_at_pos_inf(const SturmSequence& s);

// Distinct real roots in (a, b]. Errors: zero polynomial, a >= b.
int count_real_roots(const UPoly& p, const Rat& a, const Rat& b);
int count_real_roots(const Polynomial<Rat>& p, const Rat& a, const Rat& b);
// Distinct real roots on all of R.
int count_real_roots_all(const UPoly& p);
// Distinct real roots in (-inf, a] and in [b, +inf).
int count_real_roots_leq(const UPoly& p, const Rat& a);
int count_real_roots_geq(const UPoly& p, const Rat& b);

// Strict positivity on the closed interval [a, b]: no root there and a
// positive midpoint sample. Errors: zero polynomial, a > b.
bool is_positive_on_interval(const UPoly& p, const Rat& a, const Rat& b);
bool is_positive_on_interval(const Polynomial<Rat>& p, const Rat& a, const Rat& b);

// p'' > 0 on [a, b] (strict), or p'' >= 0 decided by root-parity analysis.
bool is_convex_on_interval(const UPoly& p, const Rat& a, const Rat& b, bool strict);
bool is_convex_on_interval(const Polynomial<Rat>& p, const Rat& a, const Rat& b, bool strict);

// (1 + (x-xi)^2)^N * f expanded; N small enough to expand.
UPoly phi_N_univariate(const UPoly& f, unsigned N, const Rat& xi = Rat(0));

// Cofactor P with phi_{N,xi}'' = (1+(x-xi)^2)^(N-2) * P; deg P <= deg f + 4
// independently of N, so positivity of phi'' can be certified for arbitrary N:
// P = 4N(N-1)(x-xi)^2 f + 2N w f + 4N w (x-xi) f' + w^2 f'',  w = 1+(x-xi)^2.
UPoly phi_ddot_cofactor(const UPoly& f, const Rat& N, const Rat& xi = Rat(0));

// Smallest N0 <= N_max such that (1+x^2)^N f is strictly convex on [a, b]
// for every N in [N0, N_max] (the exponent's stabilization point; an
// already-convex f can still need N0 > 0 because small powers of 1+x^2
// break convexity first). f must be certifiably positive on [a, b].
std::optional<int> min_convexifying_N(const UPoly& f, const Rat& a, const Rat& b, int N_max = 64);
std::optional<int> min_convexifying_N(const Polynomial<Rat>& f, const Rat& a, const Rat& b, int N_max = 64);

}  // namespace polyconv
