#include "polyconv/psd.hpp"

#include <stdexcept>

namespace polyconv {

namespace {

// Determinant by fraction-free-ish Gaussian elimination over Q.
Rat det_rat(std::vector<std::vector<Rat>> m) {
  const std::size_t n = m.size();
  Rat det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) return Rat(0);
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    const Rat inv = Rat(1) / m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r][col] == 0) continue;
      const Rat f = m[r][col] * inv;
      for (std::size_t c = col + 1; c < n; ++c) m[r][c] -= f * m[col][c];
      m[r][col] = 0;
    }
  }
  return det;
}

}  // namespace

PsdClass sylvester_psd(const std::vector<std::vector<Rat>>& H) {
  const std::size_t n = H.size();
  if (n == 0 || n > 12) throw std::invalid_argument("sylvester_psd: order must be in [1, 12]");
  for (std::size_t i = 0; i < n; ++i) {
    if (H[i].size() != n) throw std::invalid_argument("sylvester_psd: matrix not square");
    for (std::size_t j = 0; j < i; ++j)
      if (H[i][j] != H[j][i]) throw std::invalid_argument("sylvester_psd: matrix not symmetric");
  }
  bool all_positive = true;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    std::vector<std::vector<Rat>> sub(idx.size(), std::vector<Rat>(idx.size()));
    for (std::size_t r = 0; r < idx.size(); ++r)
      for (std::size_t c = 0; c < idx.size(); ++c) sub[r][c] = H[idx[r]][idx[c]];
    const Rat d = det_rat(std::move(sub));
    if (d < 0) return PsdClass::Indefinite;
    if (d == 0) all_positive = false;
  }
  return all_positive ? PsdClass::PositiveDefinite : PsdClass::PositiveSemidefinite;
}

PsdClass sylvester_psd(const std::vector<std::vector<double>>& H) {
  std::vector<std::vector<Rat>> R(H.size());
  for (std::size_t i = 0; i < H.size(); ++i) {
    R[i].reserve(H[i].size());
    for (double v : H[i]) R[i].push_back(rat_from_double(v));
  }
  return sylvester_psd(R);
}

const char* psd_class_name(PsdClass c) {
  switch (c) {
    case PsdClass::PositiveDefinite: return "positive-definite";
    case PsdClass::PositiveSemidefinite: return "positive-semidefinite";
    case PsdClass::Indefinite: return "indefinite";
  }
  return "?";
}

}  // namespace polyconv
