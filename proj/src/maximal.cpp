#include "maxlip/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "maxlip/naive.hpp"
#include "maxlip/parallel.hpp"
#include "maxlip/prefix_sum.hpp"

namespace maxlip {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// out[x] = max of in[s] over starts s in [x-k+1, x] clipped to [0, count).
// Writes m = count + k - 1 outputs.
void window_max(const double* in, int count, int k, double* out) {
  const int m = count + k - 1;
  std::vector<int> dq(static_cast<std::size_t>(count));
  int head = 0, tail = 0;
  for (int x = 0; x < m; ++x) {
    if (x < count) {
      while (tail > head && in[dq[std::size_t(tail - 1)]] <= in[x]) --tail;
      dq[std::size_t(tail++)] = x;
    }
    while (dq[std::size_t(head)] < x - k + 1) ++head;
    out[x] = in[dq[std::size_t(head)]];
  }
}

// For every cell of `region`, the max of value(Q) over cubes Q of the listed
// sides that lie inside `region` and contain the cell. Box-local row-major.
template <class Value>
Eigen::ArrayXd region_cube_max(const Grid& g, const Cube& region, const std::vector<int>& sides, Value&& value) {
  const int dim = g.dim();
  const int m = region.side;
  const Eigen::Index cells = dim == 1 ? m : Eigen::Index(m) * m;
  Eigen::ArrayXd out = Eigen::ArrayXd::Constant(cells, kNegInf);
  std::vector<double> table, rows, col_in, col_out(static_cast<std::size_t>(m));
  for (int k : sides) {
    if (k > m) break;
    const int s = m - k + 1;
    if (dim == 1) {
      table.resize(std::size_t(s));
      for (int i = 0; i < s; ++i) table[std::size_t(i)] = value(Cube{{region.start[0] + i, 0}, k});
      window_max(table.data(), s, k, col_out.data());
      for (int x = 0; x < m; ++x) out[x] = std::max(out[x], col_out[std::size_t(x)]);
      continue;
    }
    table.resize(std::size_t(s) * s);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j)
        table[std::size_t(i) * s + j] = value(Cube{{region.start[0] + i, region.start[1] + j}, k});
    // Along the second axis, then the first.
    rows.resize(std::size_t(s) * m);
    for (int i = 0; i < s; ++i) window_max(&table[std::size_t(i) * s], s, k, &rows[std::size_t(i) * m]);
    col_in.resize(std::size_t(s));
    for (int xj = 0; xj < m; ++xj) {
      for (int i = 0; i < s; ++i) col_in[std::size_t(i)] = rows[std::size_t(i) * m + xj];
      window_max(col_in.data(), s, k, col_out.data());
      for (int xi = 0; xi < m; ++xi) {
        double& o = out[Eigen::Index(xi) * m + xj];
        o = std::max(o, col_out[std::size_t(xi)]);
      }
    }
  }
  return out;
}

// Mean oscillation of g chi_S over each family cube meeting `region`,
// maximized onto the cells of region (box-local row-major).
Eigen::ArrayXd sharp_core(const Grid& g, const Eigen::ArrayXd& v, const PrefixSums& sums, const Box& support,
                          const Box& region, CubeFamily mode) {
  const int dim = g.dim();
  const int n = g.cells();
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(region.cell_count(dim));
  const int rw = region.hi[1] - region.lo[1];
  auto visit = [&](const Cube& q) {
    const Box qb = q.box(dim);
    const Box r = intersect(qb, support, dim);
    const double count = double(cell_count(g, q));
    const double c = double(sums.sum(r) / (long double)count);
    double osc = (count - double(r.cell_count(dim))) * std::abs(c);
    for_each_cell(r, dim, [&](const Cell& y) { osc += std::abs(v[g.linear(y)] - c); });
    const double avg = osc / count;
    for_each_cell(intersect(qb, region, dim), dim, [&](const Cell& x) {
      double& o = out[Eigen::Index(x[0] - region.lo[0]) * rw + (x[1] - region.lo[1])];
      o = std::max(o, avg);
    });
  };
  for (int k : side_lengths(g, mode)) {
    const int s0 = std::max(0, region.lo[0] - k + 1), s1 = std::min(region.hi[0] - 1, n - k);
    if (dim == 1) {
      for (int s = s0; s <= s1; ++s) visit(Cube{{s, 0}, k});
    } else {
      const int t0 = std::max(0, region.lo[1] - k + 1), t1 = std::min(region.hi[1] - 1, n - k);
      for (int s = s0; s <= s1; ++s)
        for (int t = t0; t <= t1; ++t) visit(Cube{{s, t}, k});
    }
  }
  return out;
}

void require_small_for_oracle(const Grid& g) {
  const int limit = g.dim() == 1 ? 64 : 16;
  if (g.cells() > limit)
    throw GridError("oracle_check: grid too large for the nested-loop oracle (N = " + std::to_string(g.cells()) +
                    ", limit " + std::to_string(limit) + ")");
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

LocalField::LocalField(Grid grid, Cube domain, Eigen::ArrayXd values)
    : grid_(std::move(grid)), domain_(domain), values_(std::move(values)) {
  require_inside(grid_, domain_);
  if (values_.size() != cell_count(grid_, domain_)) throw GridError("LocalField: value count does not match domain");
}

double LocalField::at(const Cell& c) const {
  if (!domain_.contains(c, grid_.dim()) || !grid_.contains(c))
    throw GridError("cell " + to_string(c, grid_.dim()) + " lies outside " + to_string(domain_, grid_.dim()));
  const Eigen::Index i = c[0] - domain_.start[0];
  return grid_.dim() == 1 ? values_[i] : values_[i * domain_.side + (c[1] - domain_.start[1])];
}

GridFunction LocalField::extend_by_zero() const {
  Eigen::ArrayXd v = Eigen::ArrayXd::Zero(grid_.size());
  Eigen::Index k = 0;
  for_each_cell(domain_.box(grid_.dim()), grid_.dim(), [&](const Cell& c) { v[grid_.linear(c)] = values_[k++]; });
  return GridFunction(grid_, std::move(v));
}

GridFunction hl_max(const GridFunction& f, CubeFamily mode) {
  const Grid& g = f.grid();
  const PrefixSums sums(g, f.values().abs());
  return f.with_values(region_cube_max(g, whole(g), side_lengths(g, mode), [&](const Cube& q) {
    return double(sums.sum(q) / (long double)cell_count(g, q));
  }));
}

GridFunction frac_max(const GridFunction& f, double alpha, CubeFamily mode) {
  const Grid& g = f.grid();
  if (!(alpha > 0.0 && alpha < g.dim()))
    throw GridError("frac_max: alpha must lie in (0, dim), got " + std::to_string(alpha));
  const PrefixSums sums(g, f.values().abs());
  const double exponent = alpha / g.dim() - 1.0;
  return f.with_values(region_cube_max(g, whole(g), side_lengths(g, mode), [&](const Cube& q) {
    return std::pow(measure(g, q), exponent) * sums.integrate(q);
  }));
}

GridFunction sharp_max(const GridFunction& f, CubeFamily mode) {
  const Grid& g = f.grid();
  const PrefixSums sums(f);
  const Box all = whole(g).box(g.dim());
  return f.with_values(sharp_core(g, f.values(), sums, all, all, mode));
}

LocalField local_max(const PrefixSums& abs_b, const Cube& q0) {
  const Grid& g = abs_b.grid();
  require_inside(g, q0);
  std::vector<int> sides(std::size_t(q0.side));
  for (int k = 1; k <= q0.side; ++k) sides[std::size_t(k - 1)] = k;
  return LocalField(g, q0, region_cube_max(g, q0, sides, [&](const Cube& q) {
                      return double(abs_b.sum(q) / (long double)cell_count(g, q));
                    }));
}

LocalField local_max(const GridFunction& b, const Cube& q0) {
  require_inside(b.grid(), q0);
  return local_max(PrefixSums(b.grid(), b.values().abs()), q0);
}

LocalField sharp_max_of_restriction(const GridFunction& b, const PrefixSums& sums, const Cube& q, CubeFamily mode) {
  const Grid& g = b.grid();
  require_inside(g, q);
  const Box box = q.box(g.dim());
  return LocalField(g, q, sharp_core(g, b.values(), sums, box, box, mode));
}

LocalField sharp_max_of_restriction(const GridFunction& b, const Cube& q, CubeFamily mode) {
  return sharp_max_of_restriction(b, PrefixSums(b), q, mode);
}

GridFunction max_commutator(const GridFunction& b, const GridFunction& f, CubeFamily mode) {
  require_same_grid(b, f);
  const Grid& g = f.grid();
  const int n = g.cells();
  const auto sides = side_lengths(g, mode);
  const Eigen::ArrayXd abs_f = f.values().abs();
  const auto& bv = b.values();
  Eigen::ArrayXd out(g.size());
  parallel_for(std::size_t(g.size()), [&](std::size_t idx) {
    const auto k = Eigen::Index(idx);
    const Cell x = g.cell(k);
    const PrefixSums sums(g, (bv[k] - bv).abs() * abs_f);
    double best = 0.0;
    for (int side : sides) {
      const long double count = g.dim() == 1 ? side : (long double)side * side;
      const int s0 = std::max(0, x[0] - side + 1), s1 = std::min(x[0], n - side);
      if (g.dim() == 1) {
        for (int s = s0; s <= s1; ++s) best = std::max(best, double(sums.sum(Cube{{s, 0}, side}) / count));
      } else {
        const int t0 = std::max(0, x[1] - side + 1), t1 = std::min(x[1], n - side);
        for (int s = s0; s <= s1; ++s)
          for (int t = t0; t <= t1; ++t) best = std::max(best, double(sums.sum(Cube{{s, t}, side}) / count));
      }
    }
    out[k] = best;
  });
  return f.with_values(std::move(out));
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

std::string name(const OperatorTag& tag) {
  return std::visit(overloaded{
                        [](const op::HardyLittlewood&) -> std::string { return "hl"; },
                        [](const op::Sharp&) -> std::string { return "sharp"; },
                        [](const op::Fractional& t) -> std::string { return "frac(" + std::to_string(t.alpha) + ")"; },
                        [](const op::Local&) -> std::string { return "local"; },
                        [](const op::MaxCommutator&) -> std::string { return "max_commutator"; },
                        [](const op::CommutatorHL&) -> std::string { return "commutator_hl"; },
                        [](const op::CommutatorSharp&) -> std::string { return "commutator_sharp"; },
                    },
                    tag);
}

GridFunction apply(const OperatorTag& tag, const GridFunction& f, CubeFamily mode) {
  return std::visit(overloaded{
                        [&](const op::HardyLittlewood&) { return hl_max(f, mode); },
                        [&](const op::Sharp&) { return sharp_max(f, mode); },
                        [&](const op::Fractional& t) { return frac_max(f, t.alpha, mode); },
                        [&](const op::Local& t) { return local_max(f, t.cube).extend_by_zero(); },
                        [&](const op::MaxCommutator& t) { return max_commutator(t.b, f, mode); },
                        [&](const op::CommutatorHL& t) { return commutator_hl(t.b, f, mode); },
                        [&](const op::CommutatorSharp& t) { return commutator_sharp(t.b, f, mode); },
                    },
                    tag);
}

double oracle_check(const OperatorTag& tag, const GridFunction& f) {
  require_small_for_oracle(f.grid());
  constexpr auto full = CubeFamily::Full;
  const GridFunction reference = std::visit(
      overloaded{
          [&](const op::HardyLittlewood&) { return naive::hl_max(f, full); },
          [&](const op::Sharp&) { return naive::sharp_max(f, full); },
          [&](const op::Fractional& t) { return naive::frac_max(f, t.alpha, full); },
          [&](const op::Local& t) { return naive::local_max(f, t.cube); },
          [&](const op::MaxCommutator& t) { return naive::max_commutator(t.b, f, full); },
          [&](const op::CommutatorHL& t) { return naive::commutator_hl(t.b, f, full); },
          [&](const op::CommutatorSharp& t) { return naive::commutator_sharp(t.b, f, full); },
      },
      tag);
  const GridFunction fast = apply(tag, f, full);
  return (fast.values() - reference.values()).abs().maxCoeff();
}

}  // namespace maxlip
