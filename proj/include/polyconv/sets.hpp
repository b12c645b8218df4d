#pragma once

#include "polyconv/polynomial.hpp"

#include <cstdint>
#include <optional>
#include <variant>

namespace polyconv {

struct Ball {
  std::vector<double> center;
  double radius = 1.0;
};

struct Box {
  std::vector<double> lo, hi;
};

// Intersection of halfspaces <a_i, x> <= b_i with a stored feasible witness.
struct Halfspaces {
  std::vector<std::vector<double>> normals;
  std::vector<double> offsets;
  std::vector<double> witness;
};

// X = {x : g_i(x) >= 0}, each g_i concave. Membership and grids only; no
// projection oracle.
struct BasicSublevel {
  std::vector<Polynomial<double>> gs;
  double bounding_radius = 1.0;
  std::vector<double> witness;
};

using ConvexSet = std::variant<Ball, Box, Halfspaces, BasicSublevel>;

Ball make_ball(std::vector<double> center, double radius);
Box make_box(std::vector<double> lo, std::vector<double> hi);
Halfspaces make_halfspaces(std::vector<std::vector<double>> normals, std::vector<double> offsets,
                           std::vector<double> witness);
// Verifies concavity of every g_i by sampled Hessians (Sylvester on -H).
BasicSublevel make_basic_sublevel(std::vector<Polynomial<double>> gs, double bounding_radius,
                                  std::vector<double> witness);

int set_dim(const ConvexSet& X);
// A point inside X (center / midpoint / stored witness).
std::vector<double> set_witness(const ConvexSet& X);

bool contains(const ConvexSet& X, std::span<const double> x, double tol = 1e-10);

// Euclidean projection. Closed forms for Ball and Box; Dykstra's alternating
// projections for Halfspaces. BasicSublevel is unsupported.
std::vector<double> project(const ConvexSet& X, std::span<const double> y);

// max{|x| : x in X}; exact for Ball/Box, vertex bound for Halfspaces.
double radius_bound(const ConvexSet& X);
// Rational over-estimate of radius_bound (used by exact certification).
Rat radius_bound_rat(const ConvexSet& X);

// Deterministic axis-aligned lattice covering X.
struct Lattice {
  std::vector<double> lo;
  std::vector<double> step;
  std::vector<std::int64_t> npts;  // points per dimension

  std::int64_t total() const {
    std::int64_t t = 1;
    for (auto n : npts) {
      if (n > 0 && t > (std::int64_t)4e12 / n)
        throw std::invalid_argument("Lattice::total: grid too fine (> 4e12 points)");
      t *= n;
    }
    return t;
  }
  void point(std::int64_t index, std::span<double> out) const {
    for (std::size_t d = npts.size(); d-- > 0;) {
      const std::int64_t n = npts[d];
      out[d] = lo[d] + (double)(index % n) * step[d];
      index /= n;
    }
  }
};

// Lattice over the bounding box of X with per-dimension step snapped so both
// box faces are hit exactly: step = range / ceil(range / mesh) <= mesh.
Lattice bounding_lattice(const ConvexSet& X, double mesh);

// Lattice points inside X; the witness point is appended if the
// intersection would otherwise be empty.
std::vector<std::vector<double>> grid_sample(const ConvexSet& X, double mesh);

struct AffineMap {
  std::vector<double> center;
  double scale = 1.0;  // to_norm(x) = (x - center) / scale

  std::vector<double> to_norm(std::span<const double> x) const;
  std::vector<double> from_norm(std::span<const double> u) const;
};

struct Normalized {
  AffineMap tau;
  ConvexSet X;               // image of the input set, inside the radius-1/2 ball
  Polynomial<double> f;      // f composed with tau^{-1}
};

// Translation + dilation putting X inside a ball of radius 1/2 about the
// origin; minimizers correspond under the map.
Normalized normalize_to_half_ball(const ConvexSet& X, const Polynomial<double>& f);

}  // namespace polyconv
