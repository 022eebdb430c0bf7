#pragma once

#include <Eigen/Core>

#include "maxlip/grid.hpp"

namespace maxlip {

// Summed-area table of cell values (a running sum in dimension 1).
// Entries are accumulated in extended precision so that region sums
// obtained by differencing stay within a few ulps of the direct sum.
class PrefixSums {
 public:
  using Table = Eigen::Array<long double, Eigen::Dynamic, Eigen::Dynamic>;

  PrefixSums(const Grid& g, const Eigen::ArrayXd& values);
  explicit PrefixSums(const GridFunction& f) : PrefixSums(f.grid(), f.values()) {}

  const Grid& grid() const { return grid_; }

  // Plain sum of cell values over the box (no measure factor).
  long double sum(const Box& b) const {
    if (b.empty(grid_.dim())) return 0.0L;
    if (grid_.dim() == 1) return table_(b.hi[0], 0) - table_(b.lo[0], 0);
    return table_(b.hi[0], b.hi[1]) - table_(b.lo[0], b.hi[1]) - table_(b.hi[0], b.lo[1]) +
           table_(b.lo[0], b.lo[1]);
  }
  long double sum(const Cube& q) const { return sum(q.box(grid_.dim())); }

  double integrate(const Cube& q) const { return double(sum(q)) * grid_.cell_measure(); }
  double average(const Cube& q) const { return double(sum(q) / cell_count(grid_, q)); }

 private:
  Grid grid_;
  Table table_;
};

// One-shot helpers; they build a table per call. Hot loops should keep a
// PrefixSums around instead.
double integrate(const GridFunction& f, const Cube& q);
double average(const GridFunction& f, const Cube& q);

}  // namespace maxlip
