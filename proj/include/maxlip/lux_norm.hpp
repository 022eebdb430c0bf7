#pragma once

#include <Eigen/Core>

#include "maxlip/exponents.hpp"
#include "maxlip/grid.hpp"

namespace maxlip {

struct NormResult {
  double value = 0.0;
  int iterations = 0;
  double lower = 0.0;  // bracket on the root of modular(f/lambda) = 1
  double upper = 0.0;
  bool converged = true;
};

struct NormError : Error {
  NormError(const std::string& what, double lo, double hi) : Error(what), lower(lo), upper(hi) {}
  double lower;
  double upper;
};

using ArrayRef = Eigen::Ref<const Eigen::ArrayXd>;

inline constexpr double kNormRelTol = 1e-12;
inline constexpr int kNormMaxIterations = 200;

// Sum over cells of |f|^p times the cell measure. Exponents need only be
// positive here; the class constraint is enforced by VariableExponent.
double modular(const ArrayRef& values, const ArrayRef& exponents, double cell_measure);

// Luxemburg norm: the lambda with modular(f/lambda) = 1, bracketed by
// doubling/halving from max|f| and refined by bisection.
NormResult lux_norm(const ArrayRef& values, const ArrayRef& exponents, double cell_measure);

double modular(const GridFunction& f, const VariableExponent& p);
NormResult lux_norm(const GridFunction& f, const VariableExponent& p);

// ||chi_Q||, and the same norm of an arbitrary function restricted to Q.
double indicator_norm(const Cube& q, const VariableExponent& p);
double restricted_norm(const Eigen::ArrayXd& values_on_q, const Cube& q, const VariableExponent& p);

// Explicit Hoelder constant 1 + 1/p_- - 1/p_+ .
inline double holder_constant(const VariableExponent& p) { return 1.0 + 1.0 / p.minus() - 1.0 / p.plus(); }

// holder_constant(p) ||f||_p ||g||_p' - integral |f g|; never negative up to
// bisection tolerance.
double holder_defect(const GridFunction& f, const GridFunction& g, const VariableExponent& p);

// | || |f|^s ||_p - ||f||_{s p}^s |. Requires s > 0 and (s p)_- >= 1.
double check_s_norm(const GridFunction& f, const VariableExponent& p, double s);

// ||chi_Q||_q ||chi_Q||_q' / |Q|.
double cube_duality_product(const Cube& q, const VariableExponent& exponent);

// ||chi_Q||_p / (|Q|^{beta/dim} ||chi_Q||_q).
double cube_embedding_ratio(const Cube& q, const ExponentPair& pair);

}  // namespace maxlip
