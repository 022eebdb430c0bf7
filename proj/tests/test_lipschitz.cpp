#include <cmath>

#include "doctest.h"
#include "maxlip/lipschitz.hpp"
#include "maxlip/lux_norm.hpp"
#include "test_util.hpp"

using namespace maxlip;
using maxlip::testing::random_function;
using maxlip::testing::unit_grid;

namespace {

double lip_bruteforce(const GridFunction& b, double beta) {
  const Grid& g = b.grid();
  double best = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i)
    for (Eigen::Index j = 0; j < g.size(); ++j) {
      if (i == j) continue;
      const double d = (g.center(g.cell(i)) - g.center(g.cell(j))).norm();
      best = std::max(best, std::abs(b[i] - b[j]) / std::pow(d, beta));
    }
  return best;
}

VariableExponent step_exponent(const Grid& g) {
  return validate_exponent(sample(g, [](const Point& x) { return x[0] < 0.5 ? 2.0 : 4.0; }));
}

VariableExponent affine_exponent(const Grid& g) {
  return validate_exponent(sample(g, [](const Point& x) { return 2.0 + x[0]; }));
}

}  // namespace

TEST_CASE("lip_seminorm examples") {
  const Grid g = unit_grid(1, 4);
  CHECK(lip_seminorm(GridFunction::constant(g, 3.0), 0.5).value == 0.0);
  const auto x = sample(g, [](const Point& p) { return p[0]; });
  const auto r = lip_seminorm(x, 0.5);
  CHECK(r.value == doctest::Approx(std::sqrt(0.75)).epsilon(1e-15));
  CHECK(r.exact);
  CHECK(to_string(r.witness, 1) == "pair[(0),(3)]");
  CHECK_THROWS_AS(lip_seminorm(x, 1.0), Error);
  CHECK_THROWS_AS(lip_seminorm(x, 0.0), Error);
}

TEST_CASE("lip_seminorm agrees with brute force and scales") {
  for (int dim : {1, 2}) {
    const Grid g = unit_grid(dim, dim == 1 ? 50 : 7);
    const auto b = random_function(g, 4);
    for (double beta : {0.2, 0.5, 0.9}) {
      const double v = lip_seminorm(b, beta).value;
      CHECK(v == doctest::Approx(lip_bruteforce(b, beta)).epsilon(1e-14));
      for (double c : {-3.0, 0.5, 10.0})
        CHECK(std::abs(lip_seminorm(b.with_values(c * b.values()), beta).value - std::abs(c) * v) <=
              1e-12 * std::abs(c) * v);
    }
  }
}

TEST_CASE("x^beta has discrete seminorm at most one, approaching one") {
  double previous = 0.0;
  for (int n : {16, 64, 256, 1024}) {
    const Grid g = unit_grid(1, n);
    const auto b = sample(g, [](const Point& p) { return std::pow(p[0], 0.5); });
    const double v = lip_seminorm(b, 0.5).value;
    CHECK(v <= 1.0 + 1e-12);
    CHECK(v >= previous);
    previous = v;
  }
  CHECK(previous > 0.95);
}

TEST_CASE("sampled seminorm is a lower bound") {
  const Grid g = unit_grid(2, 65);
  const auto b = sample(g, [](const Point& p) { return p[0] + 2.0 * p[1]; });
  const auto r = lip_seminorm(b, 0.5, LipSampling{20000, 7});
  CHECK_FALSE(r.exact);
  // exact value: sup |(1,2).d| / |d|^{1/2} over grid displacements, at most sqrt(5)*sqrt(max |d|)
  CHECK(r.value <= std::sqrt(5.0) * std::pow(std::sqrt(2.0) * 64.0 / 65.0, 0.5) + 1e-12);
  CHECK(r.value > 0.0);
}

TEST_CASE("osc_norm_q") {
  const Grid g = unit_grid(1, 32);
  CHECK(osc_norm_q(GridFunction::constant(g, 2.0), 0.5, 1.0).value == 0.0);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto b = random_function(g, seed);
    const double o1 = osc_norm_q(b, 0.5, 1.0).value;
    CHECK(o1 <= osc_norm_q(b, 0.5, 2.0).value + 1e-12);
    CHECK(o1 <= lip_seminorm(b, 0.5).value + 1e-12);
  }
  const Grid g2 = unit_grid(2, 8);
  const auto b2 = random_function(g2, 3);
  CHECK(osc_norm_q(b2, 0.5, 1.0).value <= std::pow(2.0, 0.25) * lip_seminorm(b2, 0.5).value + 1e-12);
}

TEST_CASE("lambda_var reduces to the oscillation norm for constant exponents") {
  for (int dim : {1, 2}) {
    const Grid g = unit_grid(dim, dim == 1 ? 24 : 6);
    const auto b = random_function(g, 17);
    for (double q : {1.5, 2.0, 4.0}) {
      const double v = lambda_var(b, 0.5, constant_exponent(g, q)).value;
      CHECK(std::abs(v - osc_norm_q(b, 0.5, q).value) <= 1e-9);
    }
  }
}

TEST_CASE("constant symbols") {
  const Grid g = unit_grid(1, 16);
  const auto q = step_exponent(g);
  const auto one = GridFunction::constant(g, 1.0);
  CHECK(lambda_var(one, 0.5, q).value == 0.0);
  CHECK(lambda_star(one, 0.5, q).value <= 1e-12);
  CHECK(lambda_sharp(GridFunction::zero(g), 0.5, q).value == 0.0);
  CHECK(lambda_star(GridFunction::zero(g), 0.5, q).value == 0.0);
}

TEST_CASE("negative constant symbol") {
  for (int n : {16, 64}) {
    const Grid g = unit_grid(1, n);
    const auto minus_one = GridFunction::constant(g, -1.0);
    const double expected = 2.0 * std::pow(g.spacing(), -0.5);
    for (const auto& q : {constant_exponent(g, 2.0), step_exponent(g), affine_exponent(g)}) {
      const auto star = lambda_star(minus_one, 0.5, q);
      CHECK(std::abs(star.value - expected) <= 1e-9 * expected);
      CHECK(std::get<Cube>(star.witness).side == 1);
      CHECK(lambda_var(minus_one, 0.5, q).value <= 1e-9);
      CHECK(std::abs(lambda_sharp(minus_one, 0.5, q).value - expected) <= 1e-9 * expected);
    }
  }
  const Grid g2 = unit_grid(2, 6);
  const auto star2 = lambda_star(GridFunction::constant(g2, -1.0), 0.5, constant_exponent(g2, 2.0));
  CHECK(std::abs(star2.value - 2.0 * std::pow(g2.cell_measure(), -0.25)) <= 1e-9 * star2.value);
}

TEST_CASE("scaling and shift behaviour of the functionals") {
  const Grid g = unit_grid(1, 20);
  const auto q = affine_exponent(g);
  const auto b = random_function(g, 5, 0.0, 1.0);
  const double var = lambda_var(b, 0.5, q).value;
  const double star = lambda_star(b, 0.5, q).value;
  const double sharp = lambda_sharp(b, 0.5, q).value;
  for (double c : {0.5, 3.0}) {
    const auto cb = b.with_values(c * b.values());
    CHECK(std::abs(lambda_var(cb, 0.5, q).value - c * var) <= 1e-9 * c * var);
    CHECK(std::abs(lambda_star(cb, 0.5, q).value - c * star) <= 1e-9 * c * star);
    CHECK(std::abs(lambda_sharp(cb, 0.5, q).value - c * sharp) <= 1e-9 * c * sharp);
  }
  for (double c : {-5.0, 0.25, 7.0})
    CHECK(std::abs(lambda_var(b.with_values(b.values() + c), 0.5, q).value - var) <= 1e-9);
}

TEST_CASE("lambda_var upper bound and per-cube chains") {
  const double beta = 0.5;
  for (int dim : {1, 2}) {
    const Grid g = unit_grid(dim, dim == 1 ? 24 : 6);
    const double dfac = std::pow(double(dim), beta / 2.0);
    const auto q = affine_exponent(g);
    const double rq = holder_constant(q);
    for (const auto& b : {sample(g, [](const Point& x) { return x[0]; }), random_function(g, 8)}) {
      const double lip = lip_seminorm(b, beta).value;
      const auto lv = lambda_var(b, beta, q);
      CHECK(lv.value <= dfac * lip + 1e-9);
      for (const auto& cube : enumerate_cubes(g, CubeFamily::Full)) {
        const Eigen::ArrayXd bq = restrict_to(b, cube);
        const Eigen::ArrayXd dev = bq - bq.mean();
        const auto chi = indicator(g, cube);
        // ||(b-b_Q) chi_Q|| <= ||M_b(chi_Q)||
        CHECK(restricted_norm(dev, cube, q) <= lux_norm(max_commutator(b, chi), q).value + 1e-9);
        // mean oscillation recovered from the functional
        const double m = measure(g, cube);
        const double lhs = dev.abs().sum() * g.cell_measure() / std::pow(m, 1.0 + beta / dim);
        CHECK(lhs <= rq * lv.value * cube_duality_product(cube, q) + 1e-9);
      }
    }
  }
}

TEST_CASE("opnorm_lower") {
  const Grid g = unit_grid(1, 16);
  const auto two = constant_exponent(g, 2.0);
  const std::vector<GridFunction> bank{random_function(g, 1), random_function(g, 2)};
  CHECK(opnorm_lower(op::MaxCommutator{GridFunction::constant(g, 1.0)}, two, two, bank).value == 0.0);
  CHECK(opnorm_lower(op::HardyLittlewood{}, two, two, bank).value >= 1.0);
  CHECK_THROWS_AS(opnorm_lower(op::HardyLittlewood{}, two, two, {GridFunction::zero(g)}), Error);
  CHECK_THROWS_AS(opnorm_lower(op::HardyLittlewood{}, two, two, {}), Error);

  const double beta = 0.25;
  const auto pair = build_pair(validate_exponent(sample(g, [](const Point& x) { return 1.6 + 0.3 * x[0]; })), beta);
  const auto b = sample(g, [](const Point& x) { return std::sqrt(x[0]); });
  const double lip = lip_seminorm(b, beta).value;
  const double mb = opnorm_lower(op::MaxCommutator{b}, pair.p, pair.q, bank).value;
  const double fr = opnorm_lower(op::Fractional{beta}, pair.p, pair.q, bank).value;
  CHECK(mb <= lip * fr + 1e-9);
}
