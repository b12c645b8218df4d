#pragma once

#include "polyconv/scalar.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace polyconv {

// Exponent multi-index, length nvars.
using Mono = std::vector<std::uint32_t>;

inline std::uint64_t mono_degree(const Mono& m) {
  std::uint64_t d = 0;
  for (auto e : m) d += e;
  return d;
}

// Graded-lexicographic, highest first. Map iteration order doubles as the
// canonical term order for formatting.
struct GradedLexDesc {
  bool operator()(const Mono& a, const Mono& b) const {
    const auto da = mono_degree(a), db = mono_degree(b);
    if (da != db) return da > db;
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
  }
};

struct ParseError : std::runtime_error {
  std::size_t offset;
  ParseError(std::size_t off, const std::string& what)
      : std::runtime_error(what + " (at byte " + std::to_string(off) + ")"), offset(off) {}
};

struct TermBudgetExceeded : std::runtime_error {
  TermBudgetExceeded() : std::runtime_error("polynomial term budget exceeded") {}
};

template <class T>
class Polynomial {
 public:
  using Terms = std::map<Mono, T, GradedLexDesc>;

  explicit Polynomial(int nvars = 1) : nvars_(nvars) {
    if (nvars < 1) throw std::invalid_argument("Polynomial: nvars must be >= 1");
  }

  static Polynomial zero(int nvars) { return Polynomial(nvars); }

  static Polynomial constant(int nvars, const T& c) {
    Polynomial p(nvars);
    p.add_term(Mono(nvars, 0), c);
    return p;
  }

  static Polynomial variable(int nvars, int index) {
    if (index < 0 || index >= nvars) throw std::invalid_argument("Polynomial::variable: index out of range");
    Polynomial p(nvars);
    Mono m(nvars, 0);
    m[index] = 1;
    p.add_term(m, T(1));
    return p;
  }

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  const Terms& terms() const { return terms_; }

  // degree of the zero polynomial is the sentinel -1
  long degree() const {
    if (terms_.empty()) return -1;
    return (long)mono_degree(terms_.begin()->first);
  }

  T coeff(const Mono& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? T(0) : it->second;
  }

  void add_term(const Mono& m, const T& c) {
    if ((int)m.size() != nvars_) throw std::invalid_argument("add_term: multi-index length mismatch");
    if (c == T(0)) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == T(0)) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_same(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check_same(o);
    for (const auto& [m, c] : o.terms_) add_term(m, T(-c));
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  Polynomial operator-() const {
    Polynomial r(nvars_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, T(-c));
    return r;
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) { return mul(a, b, 0); }

  Polynomial& operator*=(const T& s) {
    if (s == T(0)) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }
  friend Polynomial operator*(Polynomial a, const T& s) { return a *= s; }
  friend Polynomial operator*(const T& s, Polynomial a) { return a *= s; }

  bool operator==(const Polynomial& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

  static Polynomial mul(const Polynomial& a, const Polynomial& b, std::size_t term_budget) {
    a.check_same(b);
    Polynomial r(a.nvars_);
    Mono m(a.nvars_);
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        for (int i = 0; i < a.nvars_; ++i) m[i] = ma[i] + mb[i];
        r.add_term(m, ca * cb);
        if (term_budget && r.terms_.size() > term_budget) throw TermBudgetExceeded();
      }
    }
    return r;
  }

  Polynomial pow(std::uint32_t e, std::size_t term_budget = 0) const {
    Polynomial acc = constant(nvars_, T(1));
    Polynomial base = *this;
    while (e > 0) {
      if (e & 1u) acc = mul(acc, base, term_budget);
      e >>= 1u;
      if (e) base = mul(base, base, term_budget);
    }
    return acc;
  }

  Polynomial derivative(int var) const {
    if (var < 0 || var >= nvars_) throw std::invalid_argument("derivative: variable out of range");
    Polynomial r(nvars_);
    for (const auto& [m, c] : terms_) {
      if (m[var] == 0) continue;
      Mono dm = m;
      dm[var] -= 1;
      r.add_term(dm, c * T((long)m[var]));
    }
    return r;
  }

  std::vector<Polynomial> gradient() const {
    std::vector<Polynomial> g;
    g.reserve(nvars_);
    for (int i = 0; i < nvars_; ++i) g.push_back(derivative(i));
    return g;
  }

  std::vector<std::vector<Polynomial>> hessian() const {
    std::vector<std::vector<Polynomial>> h(nvars_, std::vector<Polynomial>(nvars_, Polynomial(nvars_)));
    for (int i = 0; i < nvars_; ++i) {
      Polynomial di = derivative(i);
      for (int j = i; j < nvars_; ++j) {
        h[i][j] = di.derivative(j);
        if (j != i) h[j][i] = h[i][j];
      }
    }
    return h;
  }

  Polynomial leading_form() const {
    if (is_zero()) throw std::invalid_argument("leading_form: zero polynomial");
    const auto d = mono_degree(terms_.begin()->first);
    Polynomial r(nvars_);
    for (const auto& [m, c] : terms_) {
      if (mono_degree(m) != d) break;  // graded order: top block first
      r.terms_.emplace(m, c);
    }
    return r;
  }

  T evaluate(std::span<const T> x) const {
    if ((int)x.size() != nvars_) throw std::invalid_argument("evaluate: dimension mismatch");
    // per-variable power tables
    std::vector<std::uint32_t> maxe(nvars_, 0);
    for (const auto& [m, c] : terms_)
      for (int i = 0; i < nvars_; ++i) maxe[i] = std::max(maxe[i], m[i]);
    std::vector<std::vector<T>> pw(nvars_);
    for (int i = 0; i < nvars_; ++i) {
      pw[i].resize(maxe[i] + 1, T(1));
      for (std::uint32_t k = 1; k <= maxe[i]; ++k) pw[i][k] = pw[i][k - 1] * x[i];
    }
    T acc(0);
    for (const auto& [m, c] : terms_) {
      T t = c;
      for (int i = 0; i < nvars_; ++i)
        if (m[i]) t *= pw[i][m[i]];
      acc += t;
    }
    return acc;
  }

  T operator()(std::span<const T> x) const { return evaluate(x); }

  // f(s*u + shift) as a polynomial in u (uniform scale, per-variable shift)
  Polynomial compose_scale_shift(const T& s, std::span<const T> shift) const {
    if ((int)shift.size() != nvars_) throw std::invalid_argument("compose_scale_shift: dimension mismatch");
    Polynomial out(nvars_);
    for (const auto& [m, c] : terms_) {
      Polynomial term = constant(nvars_, c);
      for (int i = 0; i < nvars_; ++i) {
        if (m[i] == 0) continue;
        // (s*u_i + shift_i)^e expanded in u_i
        Polynomial fac(nvars_);
        const std::uint32_t e = m[i];
        for (std::uint32_t k = 0; k <= e; ++k) {
          T coef = binom_t(e, k) * pow_scalar(s, k) * pow_scalar(shift[i], e - k);
          if (coef == T(0)) continue;
          Mono mm(nvars_, 0);
          mm[i] = k;
          fac.add_term(mm, coef);
        }
        term = term * fac;
      }
      out += term;
    }
    return out;
  }

 private:
  void check_same(const Polynomial& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("polynomial arity mismatch");
  }
  static T pow_scalar(const T& b, std::uint32_t e) {
    T r(1);
    for (std::uint32_t i = 0; i < e; ++i) r *= b;
    return r;
  }
  static T binom_t(std::uint32_t n, std::uint32_t k) {
    T r(1);
    for (std::uint32_t i = 1; i <= k; ++i) r = r * T((long)(n - k + i)) / T((long)i);
    return r;
  }

  int nvars_;
  Terms terms_;
};

// ---------------------------------------------------------------------------
// coefficient-mass bounds on the ball of radius R

// A(h,R) = sum |a_nu| R^|nu|; dominates |h| on B(R)
template <class T>
T bound_A(const Polynomial<T>& h, const T& R) {
  if (R <= T(0)) throw std::invalid_argument("bound_A: R must be positive");
  T acc(0);
  for (const auto& [m, c] : h.terms()) {
    T t = abs_val(c);
    for (std::uint64_t j = 0; j < mono_degree(m); ++j) t *= R;
    acc += t;
  }
  return acc;
}

// B(h,R) = sum_{j>=1} j |a_nu| R^(j-1); dominates |grad h| on B(R)
template <class T>
T bound_B(const Polynomial<T>& h, const T& R) {
  if (R <= T(0)) throw std::invalid_argument("bound_B: R must be positive");
  T acc(0);
  for (const auto& [m, c] : h.terms()) {
    const auto j = mono_degree(m);
    if (j == 0) continue;
    T t = abs_val(c) * T((long)j);
    for (std::uint64_t k = 0; k + 1 < j; ++k) t *= R;
    acc += t;
  }
  return acc;
}

template <class T>
T l1_norm(const Polynomial<T>& p) {
  T acc(0);
  for (const auto& [m, c] : p.terms()) acc += abs_val(c);
  return acc;
}

// max{1, sum k|a_k| R^(k-1), sum k(k-1)|a_k| R^(k-2)} for univariate f;
// dominates |f'| and |f''| on [-R, R].
template <class T>
T bound_D_uni(const Polynomial<T>& f, const T& R) {
  if (f.nvars() != 1) throw std::invalid_argument("bound_D_uni: univariate polynomial required");
  if (R <= T(0)) throw std::invalid_argument("bound_D_uni: R must be positive");
  T s1(0), s2(0);
  for (const auto& [m, c] : f.terms()) {
    const std::uint32_t k = m[0];
    const T a = abs_val(c);
    if (k >= 1) {
      T t = a * T((long)k);
      for (std::uint32_t j = 0; j + 1 < k; ++j) t *= R;
      s1 += t;
    }
    if (k >= 2) {
      T t = a * T((long)k) * T((long)k - 1);
      for (std::uint32_t j = 0; j + 2 < k; ++j) t *= R;
      s2 += t;
    }
  }
  T best(1);
  if (s1 > best) best = s1;
  if (s2 > best) best = s2;
  return best;
}

namespace detail {
inline double sqrt_upper_of(double v) { return std::sqrt(v); }
inline Rat sqrt_upper_of(const Rat& v) { return sqrt_upper(v); }
}  // namespace detail

// DD(f,R): dominates |(f.gamma)'| and |(f.gamma)''| along any affine line
// inside B(R). The sqrt(1+R^2) factor is replaced by a rational upper bound
// in exact mode, which keeps the result a valid over-estimate.
template <class T>
T bound_DD(const Polynomial<T>& f, const T& R) {
  if (R <= T(0)) throw std::invalid_argument("bound_DD: R must be positive");
  T s1(0), s2(0);
  for (const auto& [m, c] : f.terms()) {
    const auto j = mono_degree(m);
    const T a = abs_val(c);
    if (j >= 1) {
      T t = a * T((long)j);
      for (std::uint64_t k = 0; k + 1 < j; ++k) t *= R;
      s1 += t;
    }
    if (j >= 2) {
      T t = a * T((long)j) * T((long)j - 1);
      for (std::uint64_t k = 0; k + 2 < j; ++k) t *= R;
      s2 += t;
    }
  }
  const T w = T(1) + R * R;
  T c1 = detail::sqrt_upper_of(w) * s1;
  T c2 = w * s2;
  T best(1);
  if (c1 > best) best = c1;
  if (c2 > best) best = c2;
  return best;
}

namespace detail {
inline double nth_root_upper_of(double v, unsigned k) { return std::pow(v, 1.0 / (double)k); }
inline Rat nth_root_upper_of(const Rat& v, unsigned k) { return nth_root_upper(v, k); }
}  // namespace detail

// Cauchy-style bound K(f) = 1 + 2 max |a_i/a_0|^(1/i): f, f', f'' have no real
// zeros with |x| >= K(f).
template <class T>
T cauchy_K(const Polynomial<T>& f) {
  if (f.nvars() != 1) throw std::invalid_argument("cauchy_K: univariate polynomial required");
  const long d = f.degree();
  if (d < 1) throw std::invalid_argument("cauchy_K: constant polynomial");
  Mono lead(1, (std::uint32_t)d);
  const T a0 = f.coeff(lead);
  T best(0);
  for (const auto& [m, c] : f.terms()) {
    const std::uint32_t k = m[0];
    if ((long)k == d) continue;
    const unsigned i = (unsigned)(d - (long)k);
    T r = detail::nth_root_upper_of(abs_val(c) / abs_val(a0), i);
    if (r > best) best = r;
  }
  return T(1) + T(2) * best;
}

// ---------------------------------------------------------------------------
// parsing / formatting

namespace detail {

inline double number_from_parts(double, const std::string& text) { return std::stod(text); }

inline Rat number_from_parts(const Rat&, const std::string& text) {
  // integer, decimal, or scientific literal -> exact rational
  std::size_t epos = text.find_first_of("eE");
  std::string mant = epos == std::string::npos ? text : text.substr(0, epos);
  long ex10 = epos == std::string::npos ? 0 : std::stol(text.substr(epos + 1));
  std::size_t dot = mant.find('.');
  std::string digits = mant;
  if (dot != std::string::npos) {
    digits = mant.substr(0, dot) + mant.substr(dot + 1);
    ex10 -= (long)(mant.size() - dot - 1);
  }
  if (digits.empty()) digits = "0";
  Rat r(Int(digits.c_str(), 10));
  Int p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, (unsigned long)std::labs(ex10));
  if (ex10 >= 0)
    r *= Rat(p10);
  else
    r /= Rat(p10);
  return r;
}

template <class T>
struct Parser {
  std::string_view s;
  std::size_t pos = 0;
  int nvars;

  void skip_ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '\n')) ++pos;
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  [[noreturn]] void fail(const std::string& what) { throw ParseError(pos, what); }

  Polynomial<T> parse() {
    Polynomial<T> r = expr();
    skip_ws();
    if (pos != s.size()) fail("unexpected trailing input");
    return r;
  }

  Polynomial<T> expr() {
    Polynomial<T> acc = term();
    for (;;) {
      char c = peek();
      if (c == '+') {
        ++pos;
        acc += term();
      } else if (c == '-') {
        ++pos;
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  Polynomial<T> term() {
    Polynomial<T> acc = factor();
    while (peek() == '*') {
      ++pos;
      acc = acc * factor();
    }
    return acc;
  }

  Polynomial<T> factor() {
    char c = peek();
    bool neg = false;
    while (c == '-' || c == '+') {
      if (c == '-') neg = !neg;
      ++pos;
      c = peek();
    }
    Polynomial<T> a = atom();
    if (peek() == '^') {
      ++pos;
      a = a.pow(parse_uint());
    }
    return neg ? -a : a;
  }

  std::uint32_t parse_uint() {
    skip_ws();
    if (pos >= s.size() || !std::isdigit((unsigned char)s[pos])) fail("integer exponent expected");
    std::uint64_t v = 0;
    while (pos < s.size() && std::isdigit((unsigned char)s[pos])) {
      v = v * 10 + (std::uint64_t)(s[pos] - '0');
      if (v > 1'000'000) fail("exponent too large");
      ++pos;
    }
    return (std::uint32_t)v;
  }

  Polynomial<T> atom() {
    char c = peek();
    if (c == '(') {
      ++pos;
      Polynomial<T> e = expr();
      if (peek() != ')') fail("expected ')'");
      ++pos;
      return e;
    }
    if (c == 'x') {
      ++pos;
      if (pos >= s.size() || !std::isdigit((unsigned char)s[pos])) fail("variable index expected after 'x'");
      std::size_t start = pos;
      std::uint64_t idx = 0;
      while (pos < s.size() && std::isdigit((unsigned char)s[pos])) {
        idx = idx * 10 + (std::uint64_t)(s[pos] - '0');
        if (idx > 1'000'000) fail("variable index too large");
        ++pos;
      }
      if (idx < 1 || (long)idx > nvars) throw ParseError(start, "variable index exceeds nvars");
      return Polynomial<T>::variable(nvars, (int)idx - 1);
    }
    if (std::isdigit((unsigned char)c) || c == '.') {
      std::string lit = number_literal();
      // rational literal p/q: '/' only ever separates two integer literals
      skip_ws();
      if (pos < s.size() && s[pos] == '/') {
        ++pos;
        skip_ws();
        if (pos >= s.size() || !std::isdigit((unsigned char)s[pos])) fail("denominator expected");
        std::string den = number_literal();
        if (lit.find_first_of(".eE") != std::string::npos || den.find_first_of(".eE") != std::string::npos)
          fail("rational literal must be integer/integer");
        T num = number_from_parts(T{}, lit);
        T d = number_from_parts(T{}, den);
        if (d == T(0)) fail("zero denominator");
        return Polynomial<T>::constant(nvars, num / d);
      }
      return Polynomial<T>::constant(nvars, number_from_parts(T{}, lit));
    }
    fail(c == '\0' ? "unexpected end of input" : std::string("unexpected character '") + c + "'");
  }

  std::string number_literal() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit((unsigned char)s[pos])) ++pos;
    if (pos < s.size() && s[pos] == '.') {
      ++pos;
      while (pos < s.size() && std::isdigit((unsigned char)s[pos])) ++pos;
    }
    if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
      std::size_t mark = pos;
      ++pos;
      if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
      if (pos < s.size() && std::isdigit((unsigned char)s[pos])) {
        while (pos < s.size() && std::isdigit((unsigned char)s[pos])) ++pos;
      } else {
        pos = mark;  // not an exponent
      }
    }
    if (pos == start) fail("number expected");
    return std::string(s.substr(start, pos - start));
  }
};

inline std::string coeff_str(double c) { return double_str(c); }
inline std::string coeff_str(const Rat& c) { return rat_str(c); }

template <class T>
bool coeff_is_one(const T& c) {
  return c == T(1);
}

}  // namespace detail

template <class T>
Polynomial<T> parse_polynomial(std::string_view text, int nvars) {
  detail::Parser<T> p{text, 0, nvars};
  return p.parse();
}

// Canonical form: graded-lex term order, explicit '*'.
template <class T>
std::string format_polynomial(const Polynomial<T>& p) {
  if (p.is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    const bool neg = c < T(0);
    T a = neg ? T(-c) : c;
    if (first) {
      if (neg) out << "-";
      first = false;
    } else {
      out << (neg ? " - " : " + ");
    }
    const bool has_vars = mono_degree(m) > 0;
    const bool unit = detail::coeff_is_one(a);
    if (!unit || !has_vars) out << detail::coeff_str(a);
    if (has_vars) {
      bool firstv = !unit;  // already printed a coefficient?
      for (int i = 0; i < p.nvars(); ++i) {
        if (m[i] == 0) continue;
        if (firstv) out << "*";
        firstv = true;
        out << "x" << (i + 1);
        if (m[i] > 1) out << "^" << m[i];
      }
    }
  }
  return out.str();
}

}  // namespace polyconv
