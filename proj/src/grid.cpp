#include "maxlip/grid.hpp"

#include <algorithm>

#include "maxlip/prefix_sum.hpp"

namespace maxlip {

Grid make_grid(int dim, int cells, std::span<const double> origin, double side) {
  if (dim != 1 && dim != 2) throw GridError("make_grid: dim must be 1 or 2, got " + std::to_string(dim));
  if (cells < 2) throw GridError("make_grid: need at least 2 cells per axis, got " + std::to_string(cells));
  if (!(side > 0.0) || !std::isfinite(side)) throw GridError("make_grid: box side must be positive");
  if (origin.size() != std::size_t(dim))
    throw GridError("make_grid: origin has " + std::to_string(origin.size()) + " components, expected " +
                    std::to_string(dim));
  Point o = Point::Zero();
  for (int a = 0; a < dim; ++a) {
    if (!std::isfinite(origin[a])) throw GridError("make_grid: non-finite origin");
    o[a] = origin[a];
  }
  return Grid(dim, cells, o, side);
}

Box intersect(const Box& a, const Box& b, int dim) {
  Box r;
  for (int ax = 0; ax < 2; ++ax) {
    r.lo[ax] = std::max(a.lo[ax], b.lo[ax]);
    r.hi[ax] = std::min(a.hi[ax], b.hi[ax]);
  }
  if (dim == 1) r.lo[1] = 0, r.hi[1] = 1;
  return r;
}

std::string to_string(const Cell& c, int dim) {
  if (dim == 1) return "(" + std::to_string(c[0]) + ")";
  return "(" + std::to_string(c[0]) + "," + std::to_string(c[1]) + ")";
}

std::string to_string(const Cube& q, int dim) {
  return "cube[start=" + to_string(q.start, dim) + ",k=" + std::to_string(q.side) + "]";
}

std::vector<int> side_lengths(const Grid& g, CubeFamily mode) {
  std::vector<int> sides;
  if (mode == CubeFamily::Full) {
    for (int k = 1; k <= g.cells(); ++k) sides.push_back(k);
  } else {
    for (int k = 1; k <= g.cells(); k *= 2) sides.push_back(k);
  }
  return sides;
}

std::vector<Cube> enumerate_cubes(const Grid& g, CubeFamily mode) {
  std::vector<Cube> out;
  const int n = g.cells();
  for (int k : side_lengths(g, mode)) {
    if (g.dim() == 1) {
      for (int s = 0; s + k <= n; ++s) out.push_back({{s, 0}, k});
    } else {
      for (int s = 0; s + k <= n; ++s)
        for (int t = 0; t + k <= n; ++t) out.push_back({{s, t}, k});
    }
  }
  return out;
}

std::vector<Cube> cubes_containing(const Grid& g, const Cell& c, CubeFamily mode) {
  if (!g.contains(c)) throw GridError("cubes_containing: cell " + to_string(c, g.dim()) + " outside grid");
  std::vector<Cube> out;
  const int n = g.cells();
  for (int k : side_lengths(g, mode)) {
    const int s0 = std::max(0, c[0] - k + 1), s1 = std::min(c[0], n - k);
    if (g.dim() == 1) {
      for (int s = s0; s <= s1; ++s) out.push_back({{s, 0}, k});
    } else {
      const int t0 = std::max(0, c[1] - k + 1), t1 = std::min(c[1], n - k);
      for (int s = s0; s <= s1; ++s)
        for (int t = t0; t <= t1; ++t) out.push_back({{s, t}, k});
    }
  }
  return out;
}

GridFunction::GridFunction(Grid grid, Eigen::ArrayXd values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw GridError("GridFunction: " + std::to_string(values_.size()) + " values for a grid of " +
                    std::to_string(grid_.size()) + " cells");
  for (Eigen::Index k = 0; k < values_.size(); ++k)
    if (!std::isfinite(values_[k]))
      throw GridError("GridFunction: non-finite value at cell " + to_string(grid_.cell(k), grid_.dim()));
}

void require_same_grid(const GridFunction& a, const GridFunction& b) {
  if (!(a.grid() == b.grid())) throw GridError("grid mismatch between operands");
}

void require_inside(const Grid& g, const Cube& q) {
  if (!inside(g, q)) throw GridError(to_string(q, g.dim()) + " is not inside the grid");
}

GridFunction indicator(const Grid& g, const Cube& q) {
  require_inside(g, q);
  Eigen::ArrayXd v = Eigen::ArrayXd::Zero(g.size());
  for_each_cell(q.box(g.dim()), g.dim(), [&](const Cell& c) { v[g.linear(c)] = 1.0; });
  return GridFunction(g, std::move(v));
}

Eigen::ArrayXd restrict_to(const Grid& g, const Eigen::ArrayXd& values, const Box& box) {
  Eigen::ArrayXd out(box.cell_count(g.dim()));
  Eigen::Index k = 0;
  for_each_cell(box, g.dim(), [&](const Cell& c) { out[k++] = values[g.linear(c)]; });
  return out;
}

PrefixSums::PrefixSums(const Grid& g, const Eigen::ArrayXd& values) : grid_(g) {
  const int n = g.cells();
  if (g.dim() == 1) {
    table_ = Table::Zero(n + 1, 1);
    for (int i = 0; i < n; ++i) table_(i + 1, 0) = table_(i, 0) + values[i];
    return;
  }
  table_ = Table::Zero(n + 1, n + 1);
  for (int i = 0; i < n; ++i) {
    long double row = 0.0L;
    for (int j = 0; j < n; ++j) {
      row += values[Eigen::Index(i) * n + j];
      table_(i + 1, j + 1) = table_(i, j + 1) + row;
    }
  }
}

double integrate(const GridFunction& f, const Cube& q) {
  require_inside(f.grid(), q);
  return PrefixSums(f).integrate(q);
}

double average(const GridFunction& f, const Cube& q) {
  require_inside(f.grid(), q);
  return PrefixSums(f).average(q);
}

}  // namespace maxlip
