// Serial vs OpenMP comparison for the grid-scan kernels on a polynomial
// lattice evaluation workload.

#include "polyconv/grid_kernels.hpp"
#include "polyconv/polynomial.hpp"
#include "polyconv/sets.hpp"

#include <omp.h>

#include <cstdio>
#include <cstdlib>

using namespace polyconv;

namespace {

struct FlatPoly {
  int n;
  std::vector<double> coef;
  std::vector<std::uint32_t> exps;

  explicit FlatPoly(const Polynomial<double>& p) : n(p.nvars()) {
    for (const auto& [m, c] : p.terms()) {
      coef.push_back(c);
      exps.insert(exps.end(), m.begin(), m.end());
    }
  }
  double eval(const double* x) const {
    double acc = 0;
    const std::uint32_t* e = exps.data();
    for (std::size_t t = 0; t < coef.size(); ++t, e += n) {
      double v = coef[t];
      for (int i = 0; i < n; ++i)
        for (std::uint32_t k = e[i]; k; --k) v *= x[i];
      acc += v;
    }
    return acc;
  }
};

template <class F>
double time_once(F&& fn) {
  const double t0 = omp_get_wtime();
  fn();
  return omp_get_wtime() - t0;
}

}  // namespace

int main(int argc, char** argv) {
  std::int64_t side = argc > 1 ? std::atoll(argv[1]) : 2048;
  const std::int64_t total = side * side;

  auto motzkin = parse_polynomial<double>("1 + x1^2*x2^2*(x1^2 + x2^2 - 3)", 2);
  const FlatPoly f(motzkin);
  const double lo = -2.0, step = 4.0 / (double)(side - 1);

  const auto value_at = [&](std::int64_t i) {
    double x[2] = {lo + (double)(i % side) * step, lo + (double)(i / side) * step};
    return f.eval(x);
  };
  const auto pred = [&](std::int64_t i) { return value_at(i) < 1e-4; };

  std::printf("grid %lld x %lld = %lld points, %d thread(s)\n", (long long)side, (long long)side,
              (long long)total, omp_get_max_threads());
  std::printf("%-22s %12s %12s %9s\n", "kernel", "serial [s]", "parallel [s]", "speedup");

  ScanResult r_s{}, r_p{};
  const double t_min_s = time_once([&] { r_s = scan_min_serial(total, value_at); });
  const double t_min_p = time_once([&] { r_p = scan_min_parallel(total, value_at); });
  if (r_s.value != r_p.value || r_s.index != r_p.index) {
    std::fprintf(stderr, "scan_min mismatch between serial and parallel runs\n");
    return 1;
  }
  const ScanResult min_found = r_s;
  std::printf("%-22s %12.4f %12.4f %8.2fx\n", "scan_min", t_min_s, t_min_p, t_min_s / t_min_p);

  const double t_max_s = time_once([&] { r_s = scan_max_serial(total, value_at); });
  const double t_max_p = time_once([&] { r_p = scan_max_parallel(total, value_at); });
  if (r_s.value != r_p.value || r_s.index != r_p.index) {
    std::fprintf(stderr, "scan_max mismatch between serial and parallel runs\n");
    return 1;
  }
  std::printf("%-22s %12.4f %12.4f %8.2fx\n", "scan_max", t_max_s, t_max_p, t_max_s / t_max_p);

  std::int64_t i_s = 0, i_p = 0;
  const double t_ff_s = time_once([&] { i_s = find_first_serial(total, pred); });
  const double t_ff_p = time_once([&] { i_p = find_first_parallel(total, pred); });
  if (i_s != i_p) {
    std::fprintf(stderr, "find_first mismatch between serial and parallel runs\n");
    return 1;
  }
  std::printf("%-22s %12.4f %12.4f %8.2fx\n", "find_first", t_ff_s, t_ff_p, t_ff_s / t_ff_p);

  std::int64_t c_s = 0, c_p = 0;
  const double t_cw_s = time_once([&] { c_s = count_where_serial(total, pred); });
  const double t_cw_p = time_once([&] { c_p = count_where_parallel(total, pred); });
  if (c_s != c_p) {
    std::fprintf(stderr, "count_where mismatch between serial and parallel runs\n");
    return 1;
  }
  std::printf("%-22s %12.4f %12.4f %8.2fx\n", "count_where", t_cw_s, t_cw_p, t_cw_s / t_cw_p);

  std::printf("min value %.6g at index %lld; %lld near-zero cells\n", min_found.value,
              (long long)min_found.index, (long long)c_s);
  return 0;
}
