#pragma once

#include <cmath>
#include <random>

#include "maxlip/grid.hpp"

namespace maxlip::testing {

inline Grid unit_grid(int dim, int n) {
  return dim == 1 ? make_grid(1, n, {0.0}, 1.0) : make_grid(2, n, {0.0, 0.0}, 1.0);
}

inline GridFunction random_function(const Grid& g, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::ArrayXd v(g.size());
  for (auto& x : v) x = u(rng);
  return GridFunction(g, std::move(v));
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace maxlip::testing
