#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace polyconv {

using Rat = mpq_class;
using Int = mpz_class;

// num/den constructor does not canonicalize on its own.
inline Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) throw std::invalid_argument("make_rat: zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

inline double to_double(double x) { return x; }
inline double to_double(const Rat& q) { return q.get_d(); }

// Exact: every finite double is a dyadic rational.
inline Rat rat_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("rat_from_double: non-finite");
  return Rat(x);
}

inline Int floor_rat(const Rat& q) {
  Int r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Int ceil_rat(const Rat& q) {
  Int r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Rat pow_rat(const Rat& base, unsigned long e) {
  Rat r;
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), e);
  return r;  // canonical since base is
}

// base^e for arbitrary-precision exponent, by squaring.
inline Rat pow_rat(const Rat& base, const Int& e) {
  if (e < 0) throw std::invalid_argument("pow_rat: negative exponent");
  if (e.fits_ulong_p()) return pow_rat(base, e.get_ui());
  Rat acc = 1, b = base;
  Int k = e;
  while (k > 0) {
    if (mpz_odd_p(k.get_mpz_t())) acc *= b;
    b *= b;
    k >>= 1;
  }
  return acc;
}

// Smallest-effort rational s with s >= sqrt(v) and s - sqrt(v) <= tol.
// Newton from above, then dyadic round-up to keep the representation small.
inline Rat sqrt_upper(const Rat& v, const Rat& tol = make_rat(1, Int(1) << 40)) {
  if (v < 0) throw std::invalid_argument("sqrt_upper: negative argument");
  if (v == 0) return Rat(0);
  if (mpz_perfect_square_p(v.get_num_mpz_t()) && mpz_perfect_square_p(v.get_den_mpz_t())) {
    Int sn, sd;
    mpz_sqrt(sn.get_mpz_t(), v.get_num_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), v.get_den_mpz_t());
    return make_rat(sn, sd);
  }
  Rat x = rat_from_double(std::sqrt(to_double(v)) * (1.0 + 1e-12) + 1e-300);
  while (x * x < v) x *= make_rat(Int(1) << 20 | 1, Int(1) << 20);
  // Newton from above; once x >= sqrt(v), x - sqrt(v) <= x - v/x.
  const Rat half_tol = tol / 2;
  while (x - v / x > half_tol) x = (x + v / x) / 2;
  // dyadic round-up keeps the representation small when tol allows it
  const Int scale = Int(1) << 48;
  if (make_rat(1, scale) <= half_tol) return make_rat(ceil_rat(x * scale), scale);
  return x;
}

// Smallest-effort rational s with s >= v^(1/k), within tol.
inline Rat nth_root_upper(const Rat& v, unsigned k, const Rat& tol = make_rat(1, Int(1) << 40)) {
  if (k == 0) throw std::invalid_argument("nth_root_upper: k == 0");
  if (v < 0) throw std::invalid_argument("nth_root_upper: negative argument");
  if (v == 0) return Rat(0);
  if (k == 1) return v;
  if (k == 2) return sqrt_upper(v, tol);
  double guess = std::pow(to_double(v), 1.0 / k);
  Rat x = rat_from_double(guess * (1.0 + 1e-9) + 1e-300);
  while (pow_rat(x, (unsigned long)k) < v) x *= make_rat(Int(1) << 16 | 1, Int(1) << 16);
  // bisection between v^(1/k) and x
  Rat lo = rat_from_double(guess * (1.0 - 1e-9));
  if (lo < 0) lo = 0;
  if (pow_rat(lo, (unsigned long)k) > v) lo = 0;
  const Rat half_tol = tol / 2;
  while (x - lo > half_tol) {
    Rat mid = (x + lo) / 2;
    if (pow_rat(mid, (unsigned long)k) >= v)
      x = mid;
    else
      lo = mid;
  }
  const Int scale = Int(1) << 48;
  if (make_rat(1, scale) <= half_tol) return make_rat(ceil_rat(x * scale), scale);
  return x;
}

inline std::string rat_str(const Rat& q) { return q.get_str(); }

// 17 significant digits: lossless double round-trip, canonical output.
inline std::string double_str(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return std::string(buf);
}

inline std::string scalar_str(double x) { return double_str(x); }
inline std::string scalar_str(const Rat& q) { return rat_str(q); }

inline Rat abs_val(const Rat& q) { return abs(q); }
inline double abs_val(double x) { return std::fabs(x); }

}  // namespace polyconv
