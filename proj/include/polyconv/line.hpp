#pragma once

#include "polyconv/polynomial.hpp"

namespace polyconv {

// Affine line gamma(t) = sqrt(1+|alpha|^2) * beta * t + alpha with
// <alpha,beta> = 0 and |beta| = 1.
template <class T>
struct LineParam {
  std::vector<T> alpha;
  std::vector<T> beta;
};

namespace detail {

template <class T>
T dot(std::span<const T> a, std::span<const T> b) {
  T acc(0);
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace detail

// Validates the pair. In double mode beta is normalized and alpha
// orthogonalized numerically; in rational mode |beta|^2 == 1 is required
// exactly and alpha is orthogonalized exactly.
template <class T>
LineParam<T> make_line(std::vector<T> alpha, std::vector<T> beta) {
  if (alpha.size() != beta.size() || alpha.empty()) throw std::invalid_argument("make_line: dimension mismatch");
  T b2 = detail::dot<T>(beta, beta);
  if constexpr (std::is_same_v<T, double>) {
    if (b2 <= 0) throw std::invalid_argument("make_line: zero direction");
    double nb = std::sqrt(b2);
    for (auto& v : beta) v /= nb;
    double ab = detail::dot<T>(alpha, beta);
    for (std::size_t i = 0; i < alpha.size(); ++i) alpha[i] -= ab * beta[i];
  } else {
    if (b2 != T(1)) throw std::invalid_argument("make_line: |beta| must equal 1 exactly in rational mode");
    T ab = detail::dot<T>(alpha, beta);
    if (ab != T(0)) {
      for (std::size_t i = 0; i < alpha.size(); ++i) alpha[i] -= ab * beta[i];
    }
  }
  return LineParam<T>{std::move(alpha), std::move(beta)};
}

template <class T>
bool line_is_valid(const LineParam<T>& L, double tol = 1e-12) {
  if (L.alpha.size() != L.beta.size() || L.alpha.empty()) return false;
  if constexpr (std::is_same_v<T, double>) {
    double b2 = detail::dot<T>(L.beta, L.beta);
    if (std::fabs(std::sqrt(b2) - 1.0) > tol) return false;
    double na = std::sqrt(detail::dot<T>(L.alpha, L.alpha));
    return std::fabs(detail::dot<T>(L.alpha, L.beta)) <= tol * std::max(1.0, na);
  } else {
    return detail::dot<T>(L.beta, L.beta) == T(1) && detail::dot<T>(L.alpha, L.beta) == T(0);
  }
}

// Rational points on the unit sphere via stereographic projection:
// beta = (2t, 1-|t|^2) / (1+|t|^2) has |beta| = 1 exactly.
inline std::vector<Rat> rational_unit_vector(std::span<const Rat> t) {
  Rat t2(0);
  for (const auto& v : t) t2 += v * v;
  const Rat den = Rat(1) + t2;
  std::vector<Rat> beta(t.size() + 1);
  for (std::size_t i = 0; i < t.size(); ++i) beta[i] = Rat(2) * t[i] / den;
  beta[t.size()] = (Rat(1) - t2) / den;
  return beta;
}

// p restricted to the line: q(t) = p(gamma(t)), univariate in t.
// With s = sqrt(1+|alpha|^2) and r(u) = p(alpha + beta u), the result is
// q(t) = sum_k r_k s^k t^k. Even powers of s are exact; odd powers use a
// rational upper convergent of s in exact mode.
template <class T>
Polynomial<T> restrict_to_line(const Polynomial<T>& p, const LineParam<T>& L) {
  if (!line_is_valid(L)) throw std::invalid_argument("restrict_to_line: invalid LineParam");
  if ((int)L.alpha.size() != p.nvars()) throw std::invalid_argument("restrict_to_line: dimension mismatch");
  const int n = p.nvars();

  // r(u) = p(alpha + beta*u): dense univariate accumulation
  std::vector<T> r;  // ascending coefficients
  auto add_to = [](std::vector<T>& dst, const std::vector<T>& src) {
    if (dst.size() < src.size()) dst.resize(src.size(), T(0));
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] += src[i];
  };
  for (const auto& [m, c] : p.terms()) {
    std::vector<T> term{c};
    for (int i = 0; i < n; ++i) {
      for (std::uint32_t e = 0; e < m[i]; ++e) {
        // multiply by (alpha_i + beta_i * u)
        std::vector<T> next(term.size() + 1, T(0));
        for (std::size_t k = 0; k < term.size(); ++k) {
          next[k] += term[k] * L.alpha[i];
          next[k + 1] += term[k] * L.beta[i];
        }
        term = std::move(next);
      }
    }
    add_to(r, term);
  }

  const T w = T(1) + detail::dot<T>(L.alpha, L.alpha);  // s^2, exact
  T s_hat;
  if constexpr (std::is_same_v<T, double>)
    s_hat = std::sqrt(w);
  else
    s_hat = sqrt_upper(w, make_rat(1, Int(1) << 40));

  Polynomial<T> q(1);
  T w_half_pow(1);  // w^(k/2) for even k, tracked incrementally
  for (std::size_t k = 0; k < r.size(); ++k) {
    if (k > 0 && k % 2 == 0) w_half_pow *= w;
    if (r[k] == T(0)) continue;
    T sk = (k % 2 == 0) ? w_half_pow : s_hat * w_half_pow;
    Mono m(1, (std::uint32_t)k);
    q.add_term(m, r[k] * sk);
  }
  return q;
}

}  // namespace polyconv
