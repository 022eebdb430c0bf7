#include "maxlip/lux_norm.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "maxlip/grid_io.hpp"

namespace maxlip {

namespace {

// log|f| and exponent for the nonzero cells only.
struct LogTerms {
  std::vector<double> log_abs;
  std::vector<double> exponent;
  double max_log = -INFINITY;
};

LogTerms log_terms(const ArrayRef& values, const ArrayRef& exponents) {
  LogTerms t;
  t.log_abs.reserve(std::size_t(values.size()));
  t.exponent.reserve(std::size_t(values.size()));
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    const double a = std::abs(values[k]);
    if (a == 0.0) continue;
    const double l = std::log(a);
    t.log_abs.push_back(l);
    t.exponent.push_back(exponents[k]);
    t.max_log = std::max(t.max_log, l);
  }
  return t;
}

// modular(f / exp(log_lambda))
double scaled_modular(const LogTerms& t, double log_lambda, double cell_measure) {
  double s = 0.0;
  for (std::size_t k = 0; k < t.log_abs.size(); ++k) s += std::exp(t.exponent[k] * (t.log_abs[k] - log_lambda));
  return s * cell_measure;
}

}  // namespace

double modular(const ArrayRef& values, const ArrayRef& exponents, double cell_measure) {
  if (values.size() != exponents.size()) throw GridError("modular: value/exponent size mismatch");
  double s = 0.0;
  for (Eigen::Index k = 0; k < values.size(); ++k) s += std::pow(std::abs(values[k]), exponents[k]);
  return s * cell_measure;
}

NormResult lux_norm(const ArrayRef& values, const ArrayRef& exponents, double cell_measure) {
  if (values.size() != exponents.size()) throw GridError("lux_norm: value/exponent size mismatch");
  const LogTerms t = log_terms(values, exponents);
  if (t.log_abs.empty()) return NormResult{};

  NormResult r;
  auto over = [&](double lambda) { return scaled_modular(t, std::log(lambda), cell_measure) > 1.0; };

  // Bracket [lo, hi] with modular(f/lo) > 1 >= modular(f/hi).
  double lambda = std::exp(t.max_log);
  double lo, hi;
  if (over(lambda)) {
    lo = lambda;
    hi = 2.0 * lambda;
    ++r.iterations;
    while (over(hi)) {
      lo = hi;
      hi *= 2.0;
      if (++r.iterations >= kNormMaxIterations) throw NormError("lux_norm: bracket did not close", lo, hi);
    }
  } else {
    hi = lambda;
    lo = 0.5 * lambda;
    ++r.iterations;
    while (!over(lo)) {
      hi = lo;
      lo *= 0.5;
      if (++r.iterations >= kNormMaxIterations) throw NormError("lux_norm: bracket did not close", lo, hi);
    }
  }

  while (hi - lo > kNormRelTol * hi) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    (over(mid) ? lo : hi) = mid;
    if (++r.iterations >= kNormMaxIterations)
      throw NormError("lux_norm: bisection did not converge within " + std::to_string(kNormMaxIterations) +
                          " iterations",
                      lo, hi);
  }
  r.lower = lo;
  r.upper = hi;
  r.value = lo + 0.5 * (hi - lo);
  r.converged = true;
  return r;
}

double modular(const GridFunction& f, const VariableExponent& p) {
  if (!(f.grid() == p.grid())) throw GridError("modular: function and exponent live on different grids");
  return modular(f.values(), p.values(), f.grid().cell_measure());
}

NormResult lux_norm(const GridFunction& f, const VariableExponent& p) {
  if (!(f.grid() == p.grid())) throw GridError("lux_norm: function and exponent live on different grids");
  return lux_norm(f.values(), p.values(), f.grid().cell_measure());
}

double indicator_norm(const Cube& q, const VariableExponent& p) {
  const Eigen::ArrayXd e = restrict_to(p.function(), q);
  return lux_norm(Eigen::ArrayXd::Ones(e.size()), e, p.grid().cell_measure()).value;
}

double restricted_norm(const Eigen::ArrayXd& values_on_q, const Cube& q, const VariableExponent& p) {
  const Eigen::ArrayXd e = restrict_to(p.function(), q);
  return lux_norm(values_on_q, e, p.grid().cell_measure()).value;
}

double holder_defect(const GridFunction& f, const GridFunction& g, const VariableExponent& p) {
  require_same_grid(f, g);
  const double lhs = (f.values() * g.values()).abs().sum() * f.grid().cell_measure();
  const double nf = lux_norm(f, p).value;
  const double ng = lux_norm(g, conjugate(p)).value;
  return holder_constant(p) * nf * ng - lhs;
}

double check_s_norm(const GridFunction& f, const VariableExponent& p, double s) {
  if (!(s > 0.0)) throw ExponentError("s-norm identity needs s > 0, got " + format_number(s));
  const Eigen::ArrayXd sp = s * p.values();
  if (sp.minCoeff() < 1.0)
    throw ExponentError("s-norm identity: (s p)_- = " + format_number(sp.minCoeff()) + " is below 1");
  if (!(f.grid() == p.grid())) throw GridError("check_s_norm: function and exponent live on different grids");
  const double m = f.grid().cell_measure();
  const Eigen::ArrayXd powered = s == 1.0 ? Eigen::ArrayXd(f.values().abs()) : Eigen::ArrayXd(f.values().abs().pow(s));
  const double lhs = lux_norm(powered, p.values(), m).value;
  const double base = lux_norm(f.values(), sp, m).value;
  const double rhs = s == 1.0 ? base : std::pow(base, s);
  return std::abs(lhs - rhs);
}

double cube_duality_product(const Cube& q, const VariableExponent& exponent) {
  const Grid& g = exponent.grid();
  require_inside(g, q);
  const Eigen::ArrayXd e = restrict_to(exponent.function(), q);
  const Eigen::ArrayXd ones = Eigen::ArrayXd::Ones(e.size());
  const double a = lux_norm(ones, e, g.cell_measure()).value;
  const double b = lux_norm(ones, e / (e - 1.0), g.cell_measure()).value;
  return a * b / measure(g, q);
}

double cube_embedding_ratio(const Cube& q, const ExponentPair& pair) {
  const Grid& g = pair.p.grid();
  require_inside(g, q);
  const double num = indicator_norm(q, pair.p);
  const double den = std::pow(measure(g, q), pair.beta / g.dim()) * indicator_norm(q, pair.q);
  return num / den;
}

}  // namespace maxlip
