#include "maxlip/naive.hpp"

#include <algorithm>
#include <cmath>

namespace maxlip::naive {

namespace {

template <class Term>
double cube_sum(const Grid& g, const Cube& q, Term&& term) {
  double s = 0.0;
  for_each_cell(q.box(g.dim()), g.dim(), [&](const Cell& c) { s += term(g.linear(c)); });
  return s;
}

template <class CubeValue>
GridFunction per_cell_max(const Grid& g, CubeFamily mode, CubeValue&& value) {
  Eigen::ArrayXd out(g.size());
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    const Cell x = g.cell(k);
    double best = 0.0;
    for (const Cube& q : cubes_containing(g, x, mode)) best = std::max(best, value(x, q));
    out[k] = best;
  }
  return GridFunction(g, std::move(out));
}

}  // namespace

GridFunction hl_max(const GridFunction& f, CubeFamily mode) {
  const Grid& g = f.grid();
  const auto& v = f.values();
  return per_cell_max(g, mode, [&](const Cell&, const Cube& q) {
    return cube_sum(g, q, [&](Eigen::Index y) { return std::abs(v[y]); }) / double(cell_count(g, q));
  });
}

GridFunction sharp_max(const GridFunction& f, CubeFamily mode) {
  const Grid& g = f.grid();
  const auto& v = f.values();
  return per_cell_max(g, mode, [&](const Cell&, const Cube& q) {
    const double n = double(cell_count(g, q));
    const double mean = cube_sum(g, q, [&](Eigen::Index y) { return v[y]; }) / n;
    return cube_sum(g, q, [&](Eigen::Index y) { return std::abs(v[y] - mean); }) / n;
  });
}

GridFunction frac_max(const GridFunction& f, double alpha, CubeFamily mode) {
  const Grid& g = f.grid();
  const auto& v = f.values();
  const double h = g.cell_measure();
  return per_cell_max(g, mode, [&](const Cell&, const Cube& q) {
    const double integral = cube_sum(g, q, [&](Eigen::Index y) { return std::abs(v[y]); }) * h;
    return std::pow(measure(g, q), alpha / g.dim() - 1.0) * integral;
  });
}

GridFunction local_max(const GridFunction& b, const Cube& q0) {
  const Grid& g = b.grid();
  const auto& v = b.values();
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(g.size());
  const auto family = enumerate_cubes(g, CubeFamily::Full);
  for_each_cell(q0.box(g.dim()), g.dim(), [&](const Cell& x) {
    double best = 0.0;
    for (const Cube& q : family) {
      if (!q0.covers(q, g.dim()) || !q.contains(x, g.dim())) continue;
      const double avg = cube_sum(g, q, [&](Eigen::Index y) { return std::abs(v[y]); }) / double(cell_count(g, q));
      best = std::max(best, avg);
    }
    out[g.linear(x)] = best;
  });
  return GridFunction(g, std::move(out));
}

GridFunction max_commutator(const GridFunction& b, const GridFunction& f, CubeFamily mode) {
  require_same_grid(b, f);
  const Grid& g = f.grid();
  const auto& bv = b.values();
  const auto& fv = f.values();
  return per_cell_max(g, mode, [&](const Cell& x, const Cube& q) {
    const double bx = bv[g.linear(x)];
    return cube_sum(g, q, [&](Eigen::Index y) { return std::abs(bx - bv[y]) * std::abs(fv[y]); }) /
           double(cell_count(g, q));
  });
}

GridFunction commutator_hl(const GridFunction& b, const GridFunction& f, CubeFamily mode) {
  require_same_grid(b, f);
  const auto mf = hl_max(f, mode);
  const auto mbf = hl_max(f.with_values(b.values() * f.values()), mode);
  return f.with_values(b.values() * mf.values() - mbf.values());
}

GridFunction commutator_sharp(const GridFunction& b, const GridFunction& f, CubeFamily mode) {
  require_same_grid(b, f);
  const auto mf = sharp_max(f, mode);
  const auto mbf = sharp_max(f.with_values(b.values() * f.values()), mode);
  return f.with_values(b.values() * mf.values() - mbf.values());
}

}  // namespace maxlip::naive
