#pragma once

#include "polyconv/polynomial.hpp"
#include "polyconv/sets.hpp"

namespace polyconv {
namespace oracles {

// Brute-force references used by the test suites. They deliberately avoid
// the library's evaluation and scan paths: plain serial loops and an
// independent term-by-term evaluator.

double oracle_eval(const Polynomial<double>& p, std::span<const double> x);

struct GridReport {
  std::vector<double> argmin;
  double min_value = 0;
  double mesh = 0;
  std::int64_t point_count = 0;
};

GridReport grid_min(const Polynomial<double>& f, const ConvexSet& X, double mesh);

std::vector<double> fd_gradient(const Polynomial<double>& f, std::span<const double> x, double h = 0);
std::vector<std::vector<double>> fd_hessian(const Polynomial<double>& f, std::span<const double> x,
                                            double h = 0);

// min |x - from| over grid points of X with |f(x) - level| within the
// Lipschitz-consistent level thickness B(f,R)*mesh; candidates are refined
// by bisection along the ray from -> x. +inf when the level band is empty.
double level_set_distance(const Polynomial<double>& f, const ConvexSet& X, std::span<const double> from,
                          double level, double mesh);

// Sign-scan root count on [a, b]: sign changes across a dense lattice,
// counting exact zero hits once.
int sign_scan_roots(const Polynomial<double>& p, double a, double b, int points = 10000);

}  // namespace oracles
}  // namespace polyconv
