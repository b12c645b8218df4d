#include "polyconv/sturm.hpp"

namespace polyconv {

UPoly UPoly::from(const Polynomial<Rat>& p) {
  if (p.nvars() != 1) throw std::invalid_argument("UPoly::from: univariate polynomial required");
  UPoly u;
  if (p.is_zero()) return u;
  u.c.assign((std::size_t)p.degree() + 1, Rat(0));
  for (const auto& [m, coef] : p.terms()) u.c[m[0]] = coef;
  return u;
}

Polynomial<Rat> UPoly::to_polynomial() const {
  Polynomial<Rat> p(1);
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] == 0) continue;
    p.add_term(Mono(1, (std::uint32_t)k), c[k]);
  }
  return p;
}

UPoly operator+(const UPoly& a, const UPoly& b) {
  UPoly r;
  r.c.resize(std::max(a.c.size(), b.c.size()), Rat(0));
  for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
  r.trim();
  return r;
}

UPoly operator-(const UPoly& a, const UPoly& b) {
  UPoly r;
  r.c.resize(std::max(a.c.size(), b.c.size()), Rat(0));
  for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] -= b.c[i];
  r.trim();
  return r;
}

UPoly operator*(const UPoly& a, const UPoly& b) {
  if (a.is_zero() || b.is_zero()) return UPoly{};
  UPoly r;
  r.c.assign(a.c.size() + b.c.size() - 1, Rat(0));
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  }
  r.trim();
  return r;
}

UPoly operator*(const UPoly& a, const Rat& s) {
  if (s == 0) return UPoly{};
  UPoly r = a;
  for (auto& v : r.c) v *= s;
  return r;
}

UPoly operator-(const UPoly& a) {
  UPoly r = a;
  for (auto& v : r.c) v = -v;
  return r;
}

bool operator==(const UPoly& a, const UPoly& b) { return a.c == b.c; }

Rat ueval(const UPoly& p, const Rat& x) {
  Rat acc(0);
  for (std::size_t i = p.c.size(); i-- > 0;) acc = acc * x + p.c[i];
  return acc;
}

int usign_at(const UPoly& p, const Rat& x) { return sgn(ueval(p, x)); }

UPoly uderiv(const UPoly& p) {
  UPoly r;
  if (p.c.size() <= 1) return r;
  r.c.resize(p.c.size() - 1);
  for (std::size_t i = 1; i < p.c.size(); ++i) r.c[i - 1] = p.c[i] * Rat((long)i);
  r.trim();
  return r;
}

std::pair<UPoly, UPoly> udivmod(const UPoly& a, const UPoly& b) {
  if (b.is_zero()) throw std::invalid_argument("udivmod: division by zero polynomial");
  UPoly rem = a, quo;
  const long db = b.deg();
  if (a.deg() >= db) quo.c.assign((std::size_t)(a.deg() - db + 1), Rat(0));
  const Rat inv_lead = Rat(1) / b.lead();
  while (!rem.is_zero() && rem.deg() >= db) {
    const long k = rem.deg() - db;
    const Rat q = rem.lead() * inv_lead;
    quo.c[(std::size_t)k] = q;
    for (long i = 0; i <= db; ++i) rem.c[(std::size_t)(k + i)] -= q * b.c[(std::size_t)i];
    rem.c.pop_back();  // leading term cancels exactly
    rem.trim();
  }
  quo.trim();
  return {std::move(quo), std::move(rem)};
}

UPoly ugcd(UPoly a, UPoly b) {
  while (!b.is_zero()) {
    UPoly r = udivmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  const Rat inv = Rat(1) / a.lead();
  for (auto& v : a.c) v *= inv;
  return a;
}

UPoly squarefree_part(const UPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("squarefree_part: zero polynomial");
  if (p.deg() == 0) return p;
  UPoly g = ugcd(p, uderiv(p));
  if (g.deg() == 0) return p;
  return udivmod(p, g).first;
}

std::vector<UPoly> squarefree_decomposition(const UPoly& p) {
  // Yun's algorithm
  if (p.is_zero()) throw std::invalid_argument("squarefree_decomposition: zero polynomial");
  std::vector<UPoly> out;
  if (p.deg() == 0) return out;
  UPoly a = ugcd(p, uderiv(p));
  if (a.deg() == 0) {
    out.push_back(p);
    return out;
  }
  UPoly b = udivmod(p, a).first;
  UPoly c = udivmod(uderiv(p), a).first;
  UPoly d = c - uderiv(b);
  for (;;) {
    UPoly f = ugcd(b, d);
    out.push_back(f);
    UPoly nb = udivmod(b, f).first;
    UPoly nc = udivmod(d, f).first;
    b = std::move(nb);
    if (b.deg() == 0) break;
    d = nc - uderiv(b);
  }
  return out;
}

SturmSequence sturm_chain(const UPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("sturm_chain: zero polynomial");
  SturmSequence s;
  UPoly p0 = squarefree_part(p);
  s.chain.push_back(p0);
  if (p0.deg() == 0) return s;
  UPoly p1 = uderiv(p0);
  s.chain.push_back(p1);
  while (s.chain.back().deg() > 0) {
    const UPoly& prev = s.chain[s.chain.size() - 2];
    const UPoly& cur = s.chain.back();
    UPoly r = -udivmod(prev, cur).second;
    if (r.is_zero()) break;  // square-free input: only at a constant tail
    s.chain.push_back(std::move(r));
  }
  return s;
}

namespace {

int count_variations(const std::vector<int>& signs) {
  int v = 0, last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

}  // namespace

int sign_variations_at(const SturmSequence& s, const Rat& x) {
  std::vector<int> signs;
  signs.reserve(s.chain.size());
  for (const auto& q : s.chain) signs.push_back(usign_at(q, x));
  return count_variations(signs);
}

int sign_variations_at_neg_inf(const SturmSequence& s) {
  std::vector<int> signs;
  signs.reserve(s.chain.size());
  for (const auto& q : s.chain) {
    int ls = sgn(q.lead());
    signs.push_back(q.deg() % 2 == 0 ? ls : -ls);
  }
  return count_variations(signs);
}

int sign_variations_at_pos_inf(const SturmSequence& s) {
  std::vector<int> signs;
  signs.reserve(s.chain.size());
  for (const auto& q : s.chain) signs.push_back(sgn(q.lead()));
  return count_variations(signs);
}

namespace {

// Distinct roots of square-free q in the open interval (a, b), assuming
// q(a) != 0 and q(b) != 0.
int sturm_open_count(const UPoly& q, const Rat& a, const Rat& b) {
  SturmSequence s = sturm_chain(q);  // q already square-free; chain recomputes harmlessly
  return sign_variations_at(s, a) - sign_variations_at(s, b);
}

// Remove a known root r from square-free q (exact synthetic division).
UPoly divide_out_root(const UPoly& q, const Rat& r) {
  UPoly lin;
  lin.c = {-r, Rat(1)};
  auto [quo, rem] = udivmod(q, lin);
  // rem must vanish; tolerate nothing else
  if (!rem.is_zero()) throw std::logic_error("divide_out_root: not a root");
  return quo;
}

}  // namespace

int count_real_roots(const UPoly& p, const Rat& a, const Rat& b) {
  if (p.is_zero()) throw std::invalid_argument("count_real_roots: zero polynomial");
  if (a >= b) throw std::invalid_argument("count_real_roots: a >= b required");
  UPoly q = squarefree_part(p);
  if (q.deg() == 0) return 0;
  int count = 0;
  if (usign_at(q, a) == 0) q = divide_out_root(q, a);  // a excluded from (a, b]
  if (q.deg() == 0) return count;
  if (usign_at(q, b) == 0) {
    ++count;  // b included
    q = divide_out_root(q, b);
  }
  if (q.deg() == 0) return count;
  return count + sturm_open_count(q, a, b);
}

int count_real_roots(const Polynomial<Rat>& p, const Rat& a, const Rat& b) {
  return count_real_roots(UPoly::from(p), a, b);
}

int count_real_roots_all(const UPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("count_real_roots_all: zero polynomial");
  UPoly q = squarefree_part(p);
  if (q.deg() == 0) return 0;
  SturmSequence s = sturm_chain(q);
  return sign_variations_at_neg_inf(s) - sign_variations_at_pos_inf(s);
}

int count_real_roots_leq(const UPoly& p, const Rat& a) {
  if (p.is_zero()) throw std::invalid_argument("count_real_roots_leq: zero polynomial");
  UPoly q = squarefree_part(p);
  if (q.deg() == 0) return 0;
  int count = 0;
  if (usign_at(q, a) == 0) {
    ++count;
    q = divide_out_root(q, a);
  }
  if (q.deg() == 0) return count;
  SturmSequence s = sturm_chain(q);
  return count + sign_variations_at_neg_inf(s) - sign_variations_at(s, a);
}

int count_real_roots_geq(const UPoly& p, const Rat& b) {
  if (p.is_zero()) throw std::invalid_argument("count_real_roots_geq: zero polynomial");
  UPoly q = squarefree_part(p);
  if (q.deg() == 0) return 0;
  int count = 0;
  if (usign_at(q, b) == 0) {
    ++count;
    q = divide_out_root(q, b);
  }
  if (q.deg() == 0) return count;
  SturmSequence s = sturm_chain(q);
  return count + sign_variations_at(s, b) - sign_variations_at_pos_inf(s);
}

bool is_positive_on_interval(const UPoly& p, const Rat& a, const Rat& b) {
  if (p.is_zero()) throw std::invalid_argument("is_positive_on_interval: zero polynomial");
  if (a > b) throw std::invalid_argument("is_positive_on_interval: a <= b required");
  if (a == b) return usign_at(p, a) > 0;
  if (usign_at(p, a) == 0) return false;
  if (count_real_roots(p, a, b) != 0) return false;
  return usign_at(p, (a + b) / 2) > 0;
}

bool is_positive_on_interval(const Polynomial<Rat>& p, const Rat& a, const Rat& b) {
  return is_positive_on_interval(UPoly::from(p), a, b);
}

namespace {

// Nonnegativity of g on [a, b]: no odd-multiplicity root strictly inside,
// and g > 0 at a sample point where g does not vanish.
bool is_nonneg_on_interval(const UPoly& g, const Rat& a, const Rat& b) {
  if (g.is_zero()) return true;
  if (g.deg() == 0) return g.c[0] > 0;
  if (a == b) return ueval(g, a) >= 0;
  auto factors = squarefree_decomposition(g);
  UPoly odd;
  odd.c = {Rat(1)};
  for (std::size_t k = 0; k < factors.size(); ++k) {
    if (k % 2 == 0 && factors[k].deg() > 0) odd = odd * factors[k];  // multiplicity k+1 odd
  }
  if (odd.deg() > 0) {
    // roots strictly inside (a, b): count over (a, b] minus a root exactly at b
    int inside = count_real_roots(odd, a, b);
    if (usign_at(odd, b) == 0) --inside;
    if (inside > 0) return false;
  }
  // deterministic sample avoiding the finitely many roots of g
  const long d = g.deg();
  for (long k = 1; k <= d + 1; ++k) {
    Rat t = a + (b - a) * Rat(k) / Rat(d + 2);
    int s = usign_at(g, t);
    if (s != 0) return s > 0;
  }
  return false;  // unreachable: g has at most d roots
}

}  // namespace

bool is_convex_on_interval(const UPoly& p, const Rat& a, const Rat& b, bool strict) {
  if (a > b) throw std::invalid_argument("is_convex_on_interval: a <= b required");
  UPoly g = uderiv(uderiv(p));
  if (strict) {
    if (g.is_zero()) return false;
    return is_positive_on_interval(g, a, b);
  }
  return is_nonneg_on_interval(g, a, b);
}

bool is_convex_on_interval(const Polynomial<Rat>& p, const Rat& a, const Rat& b, bool strict) {
  return is_convex_on_interval(UPoly::from(p), a, b, strict);
}

UPoly phi_N_univariate(const UPoly& f, unsigned N, const Rat& xi) {
  UPoly w;  // 1 + (x - xi)^2
  w.c = {Rat(1) + xi * xi, Rat(-2) * xi, Rat(1)};
  UPoly acc;
  acc.c = {Rat(1)};
  UPoly base = w;
  unsigned e = N;
  while (e > 0) {
    if (e & 1u) acc = acc * base;
    e >>= 1u;
    if (e) base = base * base;
  }
  return acc * f;
}

UPoly phi_ddot_cofactor(const UPoly& f, const Rat& N, const Rat& xi) {
  UPoly v;  // x - xi
  v.c = {-xi, Rat(1)};
  UPoly w = v * v;  // (x-xi)^2
  UPoly one;
  one.c = {Rat(1)};
  UPoly wp1 = w + one;  // 1 + (x-xi)^2
  const UPoly fp = uderiv(f);
  const UPoly fpp = uderiv(fp);
  UPoly out = (w * f) * (Rat(4) * N * (N - 1));
  out = out + (wp1 * f) * (Rat(2) * N);
  out = out + ((wp1 * v) * fp) * (Rat(4) * N);
  out = out + (wp1 * wp1) * fpp;
  return out;
}

std::optional<int> min_convexifying_N(const UPoly& f, const Rat& a, const Rat& b, int N_max) {
  if (!is_positive_on_interval(f, a, b))
    throw std::invalid_argument("min_convexifying_N: f must be positive on [a, b]");
  // Stabilization point: smallest N0 with phi_N strictly convex on [a, b]
  // for every N in [N0, N_max]. A convex f has N0 = 0 only if multiplying
  // by (1+x^2)^N never breaks convexity along the way.
  // phi_N'' = (1+x^2)^(N-2) * cofactor: strict convexity reduces to the
  // cofactor being positive on [a, b], at any N.
  std::optional<int> run_start;
  for (int N = 0; N <= N_max; ++N) {
    UPoly cof = phi_ddot_cofactor(f, Rat(N), Rat(0));
    const bool convex = !cof.is_zero() && is_positive_on_interval(cof, a, b);
    if (convex) {
      if (!run_start) run_start = N;
    } else {
      run_start.reset();
    }
  }
  return run_start;
}

std::optional<int> min_convexifying_N(const Polynomial<Rat>& f, const Rat& a, const Rat& b, int N_max) {
  return min_convexifying_N(UPoly::from(f), a, b, N_max);
}

}  // namespace polyconv
