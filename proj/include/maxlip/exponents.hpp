#pragma once

#include "maxlip/grid.hpp"

namespace maxlip {

// Max over distinct cell-center pairs of |p(x)-p(y)| log(e + 1/|x-y|).
// `exact` is false when only a deterministic sample of pairs was visited.
struct LogHolder {
  double value = 0.0;
  bool exact = true;
};

LogHolder log_holder_constant(const GridFunction& p);

// A cellwise exponent p(.) with 1 < p_- <= p_+ < infinity.
class VariableExponent {
 public:
  const GridFunction& function() const { return p_; }
  const Grid& grid() const { return p_.grid(); }
  const Eigen::ArrayXd& values() const { return p_.values(); }
  double operator[](Eigen::Index k) const { return p_[k]; }

  double minus() const { return minus_; }
  double plus() const { return plus_; }
  double log_holder() const { return log_holder_.value; }
  bool log_holder_exact() const { return log_holder_.exact; }

  bool is_constant() const { return minus_ == plus_; }

 private:
  friend VariableExponent validate_exponent(const GridFunction&);
  explicit VariableExponent(GridFunction p) : p_(std::move(p)) {}

  GridFunction p_;
  double minus_ = 0.0;
  double plus_ = 0.0;
  LogHolder log_holder_;
};

// Throws ExponentError naming the first cell with p <= 1.
VariableExponent validate_exponent(const GridFunction& p);

inline VariableExponent constant_exponent(const Grid& g, double p) {
  return validate_exponent(GridFunction::constant(g, p));
}

// p' = p / (p - 1).
VariableExponent conjugate(const VariableExponent& p);

// lambda * p(.), lambda > 0 (must keep the result above 1).
VariableExponent scaled(const VariableExponent& p, double lambda);

// Pair linked by 1/q = 1/p - beta/dim, with q_-(dim - beta)/dim > 1.
struct ExponentPair {
  VariableExponent p;
  VariableExponent q;
  double beta;
  double q0_check;
};

ExponentPair build_pair(const VariableExponent& p, double beta);

// q0 = r q, r'q with 1/r + 1/r' = 1, and p0 from 1/p0 = 1/q0 + beta/dim.
struct SplitExponents {
  VariableExponent q0;
  VariableExponent r_conj_q;
  VariableExponent p0;
  double r;
  double r_conj;
};

SplitExponents split_exponents(const VariableExponent& q, double beta, double r);

}  // namespace maxlip
