#pragma once

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "maxlip/error.hpp"

namespace maxlip {

// Per-axis cell index. In dimension 1 the second component is always 0.
using Cell = std::array<int, 2>;
using Point = Eigen::Vector2d;

// Cell-centered uniform partition of the box origin + [0, side]^dim.
class Grid {
 public:
  int dim() const { return dim_; }
  int cells() const { return cells_; }
  double side() const { return side_; }
  double spacing() const { return spacing_; }
  const Point& origin() const { return origin_; }

  // Number of cells, cells^dim.
  Eigen::Index size() const { return dim_ == 1 ? cells_ : Eigen::Index(cells_) * cells_; }
  double cell_measure() const { return std::pow(spacing_, dim_); }

  double center(int axis, int i) const { return origin_[axis] + (i + 0.5) * spacing_; }
  Point center(const Cell& c) const {
    return {center(0, c[0]), dim_ == 2 ? center(1, c[1]) : 0.0};
  }

  bool contains(const Cell& c) const {
    for (int a = 0; a < dim_; ++a)
      if (c[a] < 0 || c[a] >= cells_) return false;
    return dim_ == 2 || c[1] == 0;
  }

  // Row-major: the first axis is the row.
  Eigen::Index linear(const Cell& c) const {
    return dim_ == 1 ? c[0] : Eigen::Index(c[0]) * cells_ + c[1];
  }
  Cell cell(Eigen::Index k) const {
    if (dim_ == 1) return {int(k), 0};
    return {int(k / cells_), int(k % cells_)};
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.dim_ == b.dim_ && a.cells_ == b.cells_ && a.side_ == b.side_ &&
           a.origin_ == b.origin_;
  }

 private:
  friend Grid make_grid(int, int, std::span<const double>, double);
  Grid(int dim, int cells, Point origin, double side)
      : dim_(dim), cells_(cells), side_(side), spacing_(side / cells), origin_(std::move(origin)) {}

  int dim_;
  int cells_;
  double side_;
  double spacing_;
  Point origin_;
};

Grid make_grid(int dim, int cells, std::span<const double> origin, double side);

inline Grid make_grid(int dim, int cells, std::initializer_list<double> origin, double side) {
  return make_grid(dim, cells, std::span<const double>(origin.begin(), origin.size()), side);
}

// Half-open cell rectangle [lo, hi) per axis.
struct Box {
  Cell lo{0, 0};
  Cell hi{0, 0};

  bool empty(int dim) const {
    for (int a = 0; a < dim; ++a)
      if (hi[a] <= lo[a]) return true;
    return false;
  }
  long cell_count(int dim) const {
    if (empty(dim)) return 0;
    long n = hi[0] - lo[0];
    return dim == 2 ? n * (hi[1] - lo[1]) : n;
  }
  bool contains(const Cell& c, int dim) const {
    for (int a = 0; a < dim; ++a)
      if (c[a] < lo[a] || c[a] >= hi[a]) return false;
    return true;
  }
};

// Axis-aligned, cell-aligned cube: `side` cells along every axis.
struct Cube {
  Cell start{0, 0};
  int side = 1;

  Box box(int dim) const {
    Box b{start, {start[0] + side, dim == 2 ? start[1] + side : 1}};
    return b;
  }
  bool contains(const Cell& c, int dim) const { return box(dim).contains(c, dim); }
  // Every cell of `inner` lies in this cube.
  bool covers(const Cube& inner, int dim) const {
    for (int a = 0; a < dim; ++a)
      if (inner.start[a] < start[a] || inner.start[a] + inner.side > start[a] + side) return false;
    return true;
  }

  friend bool operator==(const Cube&, const Cube&) = default;
};

inline bool inside(const Grid& g, const Cube& q) {
  if (q.side < 1) return false;
  for (int a = 0; a < g.dim(); ++a)
    if (q.start[a] < 0 || q.start[a] + q.side > g.cells()) return false;
  return g.dim() == 2 || q.start[1] == 0;
}

inline long cell_count(const Grid& g, const Cube& q) {
  return g.dim() == 2 ? long(q.side) * q.side : q.side;
}

inline double measure(const Grid& g, const Cube& q) {
  return std::pow(q.side * g.spacing(), g.dim());
}

// The whole box as a cube.
inline Cube whole(const Grid& g) { return Cube{{0, 0}, g.cells()}; }

Box intersect(const Box& a, const Box& b, int dim);

std::string to_string(const Cube& q, int dim);
std::string to_string(const Cell& c, int dim);

enum class CubeFamily { Full, DyadicSides };

// Admissible side lengths in ascending order.
std::vector<int> side_lengths(const Grid& g, CubeFamily mode);

// Ascending side, then lexicographic start.
std::vector<Cube> enumerate_cubes(const Grid& g, CubeFamily mode);
std::vector<Cube> cubes_containing(const Grid& g, const Cell& c, CubeFamily mode);

// Real values on the cells of a grid. Always finite.
class GridFunction {
 public:
  GridFunction(Grid grid, Eigen::ArrayXd values);

  static GridFunction constant(const Grid& g, double c) {
    return GridFunction(g, Eigen::ArrayXd::Constant(g.size(), c));
  }
  static GridFunction zero(const Grid& g) { return constant(g, 0.0); }

  const Grid& grid() const { return grid_; }
  const Eigen::ArrayXd& values() const { return values_; }
  Eigen::Index size() const { return values_.size(); }

  double operator[](Eigen::Index k) const { return values_[k]; }
  double at(const Cell& c) const { return values_[grid_.linear(c)]; }

  // Same grid, new values.
  GridFunction with_values(Eigen::ArrayXd values) const {
    return GridFunction(grid_, std::move(values));
  }

 private:
  Grid grid_;
  Eigen::ArrayXd values_;
};

void require_same_grid(const GridFunction& a, const GridFunction& b);
void require_inside(const Grid& g, const Cube& q);

template <class Formula>
GridFunction sample(const Grid& g, Formula&& formula) {
  Eigen::ArrayXd v(g.size());
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    const Cell c = g.cell(k);
    v[k] = formula(g.center(c));
    if (!std::isfinite(v[k]))
      throw GridError("sample: non-finite value at cell " + to_string(c, g.dim()));
  }
  return GridFunction(g, std::move(v));
}

GridFunction indicator(const Grid& g, const Cube& q);

// Values on the cells of `box`, row-major in box-local order.
Eigen::ArrayXd restrict_to(const Grid& g, const Eigen::ArrayXd& values, const Box& box);
inline Eigen::ArrayXd restrict_to(const GridFunction& f, const Cube& q) {
  require_inside(f.grid(), q);
  return restrict_to(f.grid(), f.values(), q.box(f.grid().dim()));
}

template <class Fn>
void for_each_cell(const Box& box, int dim, Fn&& fn) {
  if (box.empty(dim)) return;
  if (dim == 1) {
    for (int i = box.lo[0]; i < box.hi[0]; ++i) fn(Cell{i, 0});
    return;
  }
  for (int i = box.lo[0]; i < box.hi[0]; ++i)
    for (int j = box.lo[1]; j < box.hi[1]; ++j) fn(Cell{i, j});
}

}  // namespace maxlip
