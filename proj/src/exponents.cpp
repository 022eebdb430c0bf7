#include "maxlip/exponents.hpp"

#include <algorithm>
#include <numbers>
#include <random>

#include "maxlip/grid_io.hpp"

namespace maxlip {

namespace {

constexpr Eigen::Index kExactPairLimit = 4096;
constexpr int kSampleCells = 1024;
constexpr std::uint64_t kSampleSeed = 0x5eed1234abcdULL;

double pair_weight(double dist) { return std::log(std::numbers::e + 1.0 / dist); }

LogHolder log_holder_exact(const GridFunction& p) {
  const Grid& g = p.grid();
  const int n = g.cells();
  const double h = g.spacing();
  const auto& v = p.values();
  double best = 0.0;
  if (g.dim() == 1) {
    for (int d = 1; d < n; ++d) {
      const double w = pair_weight(d * h);
      double m = 0.0;
      for (int i = 0; i + d < n; ++i) m = std::max(m, std::abs(v[i] - v[i + d]));
      best = std::max(best, m * w);
    }
    return {best, true};
  }
  // Displacements (di, dj) with di > 0, or di == 0 and dj > 0.
  for (int di = 0; di < n; ++di) {
    for (int dj = (di == 0 ? 1 : -(n - 1)); dj < n; ++dj) {
      const double w = pair_weight(h * std::hypot(double(di), double(dj)));
      double m = 0.0;
      for (int i = 0; i + di < n; ++i) {
        const int j0 = std::max(0, -dj), j1 = std::min(n, n - dj);
        for (int j = j0; j < j1; ++j)
          m = std::max(m, std::abs(v[Eigen::Index(i) * n + j] - v[Eigen::Index(i + di) * n + j + dj]));
      }
      best = std::max(best, m * w);
    }
  }
  return {best, true};
}

LogHolder log_holder_sampled(const GridFunction& p) {
  const Grid& g = p.grid();
  const auto& v = p.values();
  double best = 0.0;
  auto visit = [&](Eigen::Index a, Eigen::Index b) {
    const double dist = (g.center(g.cell(a)) - g.center(g.cell(b))).norm();
    best = std::max(best, std::abs(v[a] - v[b]) * pair_weight(dist));
  };
  // Adjacent pairs along every axis.
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    const Cell c = g.cell(k);
    for (int a = 0; a < g.dim(); ++a) {
      Cell nb = c;
      ++nb[a];
      if (g.contains(nb)) visit(k, g.linear(nb));
    }
  }
  std::mt19937_64 rng(kSampleSeed);
  std::uniform_int_distribution<Eigen::Index> pick(0, g.size() - 1);
  std::vector<Eigen::Index> sample(kSampleCells);
  for (auto& s : sample) s = pick(rng);
  std::sort(sample.begin(), sample.end());
  sample.erase(std::unique(sample.begin(), sample.end()), sample.end());
  for (std::size_t a = 0; a < sample.size(); ++a)
    for (std::size_t b = a + 1; b < sample.size(); ++b) visit(sample[a], sample[b]);
  return {best, false};
}

}  // namespace

LogHolder log_holder_constant(const GridFunction& p) {
  if (p.size() <= kExactPairLimit) return log_holder_exact(p);
  return log_holder_sampled(p);
}

VariableExponent validate_exponent(const GridFunction& p) {
  const Grid& g = p.grid();
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    if (!(p[k] > 1.0))
      throw ExponentError("exponent violates 1 < p_- : p = " + format_number(p[k]) + " at cell " +
                          to_string(g.cell(k), g.dim()));
  }
  VariableExponent e(p);
  e.minus_ = p.values().minCoeff();
  e.plus_ = p.values().maxCoeff();
  e.log_holder_ = log_holder_constant(p);
  return e;
}

VariableExponent conjugate(const VariableExponent& p) {
  const auto& v = p.values();
  return validate_exponent(p.function().with_values(v / (v - 1.0)));
}

VariableExponent scaled(const VariableExponent& p, double lambda) {
  if (!(lambda > 0.0)) throw ExponentError("exponent scale factor must be positive");
  return validate_exponent(p.function().with_values(lambda * p.values()));
}

ExponentPair build_pair(const VariableExponent& p, double beta) {
  const double n = p.grid().dim();
  if (!(beta > 0.0 && beta < 1.0)) throw ExponentError("beta must lie in (0,1), got " + format_number(beta));
  if (!(beta < n / p.plus()))
    throw ExponentError("pair requires 0 < beta < dim/p_+ ; beta = " + format_number(beta) +
                        ", dim/p_+ = " + format_number(n / p.plus()));
  const auto& pv = p.values();
  auto q = validate_exponent(p.function().with_values(n * pv / (n - beta * pv)));
  const double q0_check = q.minus() * (n - beta) / n;
  if (!(q0_check > 1.0))
    throw ExponentError("pair requires q(.)(dim-beta)/dim above 1 everywhere; q_-(dim-beta)/dim = " +
                        format_number(q0_check));
  return ExponentPair{p, std::move(q), beta, q0_check};
}

SplitExponents split_exponents(const VariableExponent& q, double beta, double r) {
  const double n = q.grid().dim();
  if (!(beta > 0.0 && beta < 1.0)) throw ExponentError("beta must lie in (0,1), got " + format_number(beta));
  if (!(r > n / (n - beta)))
    throw ExponentError("splitting requires r > dim/(dim-beta) = " + format_number(n / (n - beta)) +
                        ", got r = " + format_number(r));
  const double r_conj = r / (r - 1.0);
  const auto& qv = q.values();
  auto q0 = validate_exponent(q.function().with_values(r * qv));
  auto rq = validate_exponent(q.function().with_values(r_conj * qv));
  auto p0 = validate_exponent(q.function().with_values(1.0 / (1.0 / q0.values() + beta / n)));
  return SplitExponents{std::move(q0), std::move(rq), std::move(p0), r, r_conj};
}

}  // namespace maxlip
