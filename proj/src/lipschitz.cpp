#include "maxlip/lipschitz.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "maxlip/grid_io.hpp"
#include "maxlip/lux_norm.hpp"
#include "maxlip/prefix_sum.hpp"

namespace maxlip {

namespace {

void require_beta(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw Error("beta must lie in (0,1), got " + format_number(beta));
}

bool exact_pairs_feasible(const Grid& g) { return g.dim() == 1 ? g.cells() <= 4096 : g.cells() <= 64; }

LipResult lip_exact(const GridFunction& b, double beta) {
  const Grid& g = b.grid();
  const int n = g.cells();
  const double h = g.spacing();
  const auto& v = b.values();
  LipResult r;
  if (g.dim() == 1) {
    for (int d = 1; d < n; ++d) {
      const double scale = std::pow(d * h, beta);
      for (int i = 0; i + d < n; ++i) {
        const double ratio = std::abs(v[i] - v[i + d]) / scale;
        if (ratio > r.value) r.value = ratio, r.witness = CellPair{{i, 0}, {i + d, 0}};
      }
    }
    return r;
  }
  for (int di = 0; di < n; ++di) {
    for (int dj = (di == 0 ? 1 : -(n - 1)); dj < n; ++dj) {
      const double scale = std::pow(h * std::hypot(double(di), double(dj)), beta);
      const int j0 = std::max(0, -dj), j1 = std::min(n, n - dj);
      for (int i = 0; i + di < n; ++i)
        for (int j = j0; j < j1; ++j) {
          const double ratio = std::abs(v[Eigen::Index(i) * n + j] - v[Eigen::Index(i + di) * n + j + dj]) / scale;
          if (ratio > r.value) r.value = ratio, r.witness = CellPair{{i, j}, {i + di, j + dj}};
        }
    }
  }
  return r;
}

LipResult lip_sampled(const GridFunction& b, double beta, const LipSampling& sampling) {
  const Grid& g = b.grid();
  const auto& v = b.values();
  LipResult r;
  r.exact = false;
  auto visit = [&](Eigen::Index a, Eigen::Index c) {
    if (a == c) return;
    const Cell ca = g.cell(a), cc = g.cell(c);
    const double dist = (g.center(ca) - g.center(cc)).norm();
    const double ratio = std::abs(v[a] - v[c]) / std::pow(dist, beta);
    if (ratio > r.value) r.value = ratio, r.witness = CellPair{ca, cc};
  };
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    const Cell c = g.cell(k);
    for (int a = 0; a < g.dim(); ++a) {
      Cell nb = c;
      ++nb[a];
      if (g.contains(nb)) visit(k, g.linear(nb));
    }
  }
  std::mt19937_64 rng(sampling.seed);
  std::uniform_int_distribution<Eigen::Index> pick(0, g.size() - 1);
  for (std::size_t s = 0; s < sampling.random_pairs; ++s) {
    const auto a = pick(rng);
    visit(a, pick(rng));
  }
  return r;
}

double cube_scale(const Grid& g, const Cube& q, double beta) { return std::pow(measure(g, q), -beta / g.dim()); }

// |Q|^{-beta/dim} ||g||_q / ||chi_Q||_q for g given on the cells of Q.
double normalized_ratio(const Eigen::ArrayXd& g_on_q, const Eigen::ArrayXd& q_on_q, const Grid& grid, const Cube& q,
                        double beta) {
  const double m = grid.cell_measure();
  const double num = lux_norm(g_on_q, q_on_q, m).value;
  if (num == 0.0) return 0.0;
  const double den = lux_norm(Eigen::ArrayXd::Ones(q_on_q.size()), q_on_q, m).value;
  return cube_scale(grid, q, beta) * num / den;
}

}  // namespace

std::string to_string(const Witness& w, int dim) {
  if (std::holds_alternative<Cell>(w)) return "cell" + to_string(std::get<Cell>(w), dim);
  if (std::holds_alternative<CellPair>(w)) {
    const auto& p = std::get<CellPair>(w);
    return "pair[" + to_string(p.first, dim) + "," + to_string(p.second, dim) + "]";
  }
  if (std::holds_alternative<Cube>(w)) return to_string(std::get<Cube>(w), dim);
  if (std::holds_alternative<std::size_t>(w)) return "bank[" + std::to_string(std::get<std::size_t>(w)) + "]";
  return "";
}

LipResult lip_seminorm(const GridFunction& b, double beta, const LipSampling& sampling) {
  require_beta(beta);
  return exact_pairs_feasible(b.grid()) ? lip_exact(b, beta) : lip_sampled(b, beta, sampling);
}

LipResult osc_norm_q(const GridFunction& b, double beta, double q, CubeFamily mode) {
  require_beta(beta);
  if (!(q >= 1.0)) throw Error("osc_norm_q: q must be at least 1, got " + format_number(q));
  const Grid& g = b.grid();
  return sweep_cubes(enumerate_cubes(g, mode), [&](const Cube& cube) {
    const Eigen::ArrayXd v = restrict_to(b, cube);
    const double mean = v.mean();
    const double power_mean = std::pow((v - mean).abs().pow(q).mean(), 1.0 / q);
    return cube_scale(g, cube, beta) * power_mean;
  });
}

LipResult lambda_var(const GridFunction& b, double beta, const VariableExponent& q, CubeFamily mode) {
  require_beta(beta);
  require_same_grid(b, q.function());
  const Grid& g = b.grid();
  return sweep_cubes(enumerate_cubes(g, mode), [&](const Cube& cube) {
    const Eigen::ArrayXd v = restrict_to(b, cube);
    return normalized_ratio(v - v.mean(), restrict_to(q.function(), cube), g, cube, beta);
  });
}

LipResult lambda_star(const GridFunction& b, double beta, const VariableExponent& q, CubeFamily mode) {
  require_beta(beta);
  require_same_grid(b, q.function());
  const Grid& g = b.grid();
  const PrefixSums abs_sums(g, b.values().abs());
  return sweep_cubes(enumerate_cubes(g, mode), [&](const Cube& cube) {
    const LocalField m = local_max(abs_sums, cube);
    return normalized_ratio(restrict_to(b, cube) - m.values(), restrict_to(q.function(), cube), g, cube, beta);
  });
}

LipResult lambda_sharp(const GridFunction& b, double beta, const VariableExponent& q, CubeFamily mode) {
  require_beta(beta);
  require_same_grid(b, q.function());
  const Grid& g = b.grid();
  const PrefixSums sums(b);
  return sweep_cubes(enumerate_cubes(g, mode), [&](const Cube& cube) {
    const LocalField s = sharp_max_of_restriction(b, sums, cube, mode);
    return normalized_ratio(restrict_to(b, cube) - 2.0 * s.values(), restrict_to(q.function(), cube), g, cube, beta);
  });
}

LipResult opnorm_lower(const OperatorTag& tag, const VariableExponent& p, const VariableExponent& q,
                       const std::vector<GridFunction>& bank, CubeFamily mode) {
  if (bank.empty()) throw Error("opnorm_lower: empty test bank");
  const Grid& g = p.grid();
  for (std::size_t i = 0; i < bank.size(); ++i) {
    require_same_grid(bank[i], p.function());
    if ((bank[i].values() == 0.0).all()) throw Error("opnorm_lower: bank entry " + std::to_string(i) + " is zero");
  }
  const auto cubes = enumerate_cubes(g, mode);
  const std::size_t total = bank.size() + cubes.size();
  LipResult r;
  for (std::size_t i = 0; i < total; ++i) {
    const GridFunction f = i < bank.size() ? bank[i] : indicator(g, cubes[i - bank.size()]);
    const double ratio = lux_norm(apply(tag, f, mode), q).value / lux_norm(f, p).value;
    if (i == 0 || ratio > r.value) r.value = ratio, r.witness = i;
  }
  return r;
}

}  // namespace maxlip
