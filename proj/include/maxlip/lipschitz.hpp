#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "maxlip/exponents.hpp"
#include "maxlip/grid.hpp"
#include "maxlip/maximal.hpp"
#include "maxlip/parallel.hpp"

namespace maxlip {

struct CellPair {
  Cell first;
  Cell second;
};

// What attains a reported supremum.
using Witness = std::variant<std::monostate, Cell, CellPair, Cube, std::size_t>;

std::string to_string(const Witness& w, int dim);

struct LipResult {
  double value = 0.0;
  Witness witness;
  bool exact = true;  // false: sampled, so `value` is a lower bound
};

struct LipSampling {
  std::size_t random_pairs = 200000;
  std::uint64_t seed = 20240601;
};

// max |b(x)-b(y)| / |x-y|^beta over distinct cell centers. Exact for dim 1
// with N <= 4096 and dim 2 with N <= 64; sampled otherwise.
LipResult lip_seminorm(const GridFunction& b, double beta, const LipSampling& sampling = {});

// sup_Q |Q|^{-beta/dim} (mean over Q of |b - b_Q|^q)^{1/q}, constant q >= 1.
LipResult osc_norm_q(const GridFunction& b, double beta, double q, CubeFamily mode = CubeFamily::Full);

// sup_Q |Q|^{-beta/dim} ||(b - b_Q) chi_Q||_q / ||chi_Q||_q
LipResult lambda_var(const GridFunction& b, double beta, const VariableExponent& q,
                     CubeFamily mode = CubeFamily::Full);

// Same with b - M_Q(b) in place of b - b_Q.
LipResult lambda_star(const GridFunction& b, double beta, const VariableExponent& q,
                      CubeFamily mode = CubeFamily::Full);

// Same with b - 2 M-sharp(b chi_Q).
LipResult lambda_sharp(const GridFunction& b, double beta, const VariableExponent& q,
                       CubeFamily mode = CubeFamily::Full);

// max over the bank (plus every family cube indicator) of
// ||T f||_q / ||f||_p. A lower bound for the discrete operator norm; the
// witness is the bank index (indicators follow the user functions).
LipResult opnorm_lower(const OperatorTag& tag, const VariableExponent& p, const VariableExponent& q,
                       const std::vector<GridFunction>& bank, CubeFamily mode = CubeFamily::Full);

// Max of fn over the family, first maximizer in enumeration order wins.
// Evaluated in parallel; the result does not depend on the thread count.
template <class Fn>
LipResult sweep_cubes(const std::vector<Cube>& cubes, Fn&& fn) {
  std::vector<double> vals(cubes.size());
  parallel_for(cubes.size(), [&](std::size_t i) { vals[i] = fn(cubes[i]); });
  LipResult r;
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    if (i == 0 || vals[i] > r.value) {
      r.value = vals[i];
      r.witness = cubes[i];
    }
  }
  return r;
}

}  // namespace maxlip
