#pragma once

#include <cstdint>
#include <limits>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace polyconv {

// Data-parallel scan kernels over an indexed point set. Every kernel has a
// serial reference implementation with identical semantics; ties in the
// reductions break toward the smallest index, so serial and parallel runs
// produce identical results.

struct ScanResult {
  double value = std::numeric_limits<double>::infinity();
  std::int64_t index = -1;
};

template <class F>
ScanResult scan_min_serial(std::int64_t count, F&& value_at) {
  ScanResult best;
  for (std::int64_t i = 0; i < count; ++i) {
    const double v = value_at(i);
    if (v < best.value) best = {v, i};
  }
  return best;
}

template <class F>
ScanResult scan_min_parallel(std::int64_t count, F&& value_at) {
  ScanResult best;
#pragma omp parallel
  {
    ScanResult local;
#pragma omp for nowait schedule(static)
    for (std::int64_t i = 0; i < count; ++i) {
      const double v = value_at(i);
      if (v < local.value) local = {v, i};
    }
#pragma omp critical(polyconv_scan_min)
    {
      if (local.value < best.value || (local.value == best.value && local.index >= 0 &&
                                       (best.index < 0 || local.index < best.index)))
        best = local;
    }
  }
  return best;
}

template <class F>
ScanResult scan_max_serial(std::int64_t count, F&& value_at) {
  ScanResult best{-std::numeric_limits<double>::infinity(), -1};
  for (std::int64_t i = 0; i < count; ++i) {
    const double v = value_at(i);
    if (v > best.value) best = {v, i};
  }
  return best;
}

template <class F>
ScanResult scan_max_parallel(std::int64_t count, F&& value_at) {
  ScanResult best{-std::numeric_limits<double>::infinity(), -1};
#pragma omp parallel
  {
    ScanResult local{-std::numeric_limits<double>::infinity(), -1};
#pragma omp for nowait schedule(static)
    for (std::int64_t i = 0; i < count; ++i) {
      const double v = value_at(i);
      if (v > local.value) local = {v, i};
    }
#pragma omp critical(polyconv_scan_max)
    {
      if (local.value > best.value || (local.value == best.value && local.index >= 0 &&
                                       (best.index < 0 || local.index < best.index)))
        best = local;
    }
  }
  return best;
}

// Smallest index satisfying the predicate, or -1.
template <class P>
std::int64_t find_first_serial(std::int64_t count, P&& pred) {
  for (std::int64_t i = 0; i < count; ++i)
    if (pred(i)) return i;
  return -1;
}

template <class P>
std::int64_t find_first_parallel(std::int64_t count, P&& pred) {
  std::int64_t best = -1;
#pragma omp parallel
  {
    std::int64_t local = -1;
#pragma omp for nowait schedule(static)
    for (std::int64_t i = 0; i < count; ++i) {
      if (local < 0 && pred(i)) local = i;
    }
#pragma omp critical(polyconv_find_first)
    {
      if (local >= 0 && (best < 0 || local < best)) best = local;
    }
  }
  return best;
}

// Number of indices satisfying the predicate.
template <class P>
std::int64_t count_where_serial(std::int64_t count, P&& pred) {
  std::int64_t n = 0;
  for (std::int64_t i = 0; i < count; ++i)
    if (pred(i)) ++n;
  return n;
}

template <class P>
std::int64_t count_where_parallel(std::int64_t count, P&& pred) {
  std::int64_t n = 0;
#pragma omp parallel for schedule(static) reduction(+ : n)
  for (std::int64_t i = 0; i < count; ++i)
    if (pred(i)) ++n;
  return n;
}

// Default entry points used across the library.
template <class F>
ScanResult scan_min(std::int64_t count, F&& value_at) {
  return scan_min_parallel(count, std::forward<F>(value_at));
}
template <class F>
ScanResult scan_max(std::int64_t count, F&& value_at) {
  return scan_max_parallel(count, std::forward<F>(value_at));
}
template <class P>
std::int64_t find_first(std::int64_t count, P&& pred) {
  return find_first_parallel(count, std::forward<P>(pred));
}

}  // namespace polyconv
