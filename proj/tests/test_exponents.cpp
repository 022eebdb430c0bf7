#include <string>

#include "doctest.h"
#include "maxlip/exponents.hpp"
#include "test_util.hpp"

using namespace maxlip;
using maxlip::testing::random_function;
using maxlip::testing::unit_grid;

namespace {

GridFunction step(const Grid& g, double left, double right, double split) {
  return sample(g, [=](const Point& x) { return x[0] < split ? left : right; });
}

std::string message_of(const GridFunction& p) {
  try {
    validate_exponent(p);
  } catch (const ExponentError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("validate_exponent caches bounds") {
  const Grid g = unit_grid(1, 4);
  const auto two = constant_exponent(g, 2.0);
  CHECK(two.minus() == 2.0);
  CHECK(two.plus() == 2.0);
  CHECK(two.log_holder() == 0.0);
  CHECK(two.is_constant());

  const auto affine = validate_exponent(sample(g, [](const Point& x) { return 2.0 + x[0]; }));
  CHECK(affine.minus() == 2.125);
  CHECK(affine.plus() == 2.875);
  CHECK_FALSE(affine.is_constant());
}

TEST_CASE("exponents at or below one are rejected with the offending cell") {
  const Grid g = unit_grid(1, 4);
  const std::string msg = message_of(GridFunction::constant(g, 1.0));
  CHECK(msg.find("1 < p_-") != std::string::npos);
  CHECK(msg.find("cell (0)") != std::string::npos);

  Eigen::ArrayXd v = Eigen::ArrayXd::Constant(4, 3.0);
  v[2] = 0.5;
  CHECK(message_of(GridFunction(g, v)).find("cell (2)") != std::string::npos);
}

TEST_CASE("log-Hoelder constant") {
  const Grid g = unit_grid(1, 4);
  const auto p = validate_exponent(sample(g, [](const Point& x) { return 2.0 + x[0]; }));
  // Brute force over the 6 pairs of centers, evaluated independently.
  CHECK(p.log_holder() == doctest::Approx(1.0493367052481644).epsilon(1e-14));
  CHECK(p.log_holder_exact());

  // Displacement sweep against a direct pair loop in dim 2.
  const Grid g2 = unit_grid(2, 9);
  const auto q = random_function(g2, 4, 1.5, 3.0);
  double best = 0.0;
  for (Eigen::Index a = 0; a < g2.size(); ++a)
    for (Eigen::Index b = 0; b < g2.size(); ++b) {
      if (a == b) continue;
      const double d = (g2.center(g2.cell(a)) - g2.center(g2.cell(b))).norm();
      best = std::max(best, std::abs(q[a] - q[b]) * std::log(std::exp(1.0) + 1.0 / d));
    }
  CHECK(log_holder_constant(q).value == doctest::Approx(best).epsilon(1e-14));

  const auto big = log_holder_constant(GridFunction::constant(unit_grid(2, 65), 2.0));
  CHECK_FALSE(big.exact);
  CHECK(big.value == 0.0);
  CHECK(log_holder_constant(GridFunction::constant(unit_grid(2, 64), 2.0)).exact);
}

TEST_CASE("conjugate") {
  const Grid g = unit_grid(1, 8);
  CHECK((conjugate(constant_exponent(g, 2.0)).values() == 2.0).all());
  CHECK((conjugate(constant_exponent(g, 3.0)).values() == 1.5).all());

  const auto s = conjugate(validate_exponent(step(g, 2.0, 4.0, 0.5)));
  for (int i = 0; i < 4; ++i) CHECK(s[i] == 2.0);
  for (int i = 4; i < 8; ++i) CHECK(s[i] == doctest::Approx(4.0 / 3.0).epsilon(1e-15));

  for (int dim : {1, 2}) {
    const auto p = validate_exponent(random_function(unit_grid(dim, 10), 77, 1.05, 6.0));
    const auto pc = conjugate(p);
    const auto back = conjugate(pc);
    CHECK(((back.values() - p.values()).abs() / p.values()).maxCoeff() <= 1e-12);
    CHECK((1.0 / p.values() + 1.0 / pc.values() - 1.0).abs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("scaling keeps the class and scales p_-") {
  const auto p = validate_exponent(random_function(unit_grid(1, 16), 3, 1.2, 2.5));
  for (double lambda : {1.5, 2.0, 7.0}) {
    const auto lp = scaled(p, lambda);
    CHECK(lp.minus() == doctest::Approx(lambda * p.minus()).epsilon(1e-15));
    CHECK(lp.plus() == doctest::Approx(lambda * p.plus()).epsilon(1e-15));
  }
  CHECK_THROWS_AS(scaled(p, 0.5), ExponentError);
}

TEST_CASE("build_pair") {
  const auto pair = build_pair(constant_exponent(unit_grid(1, 8), 2.0), 0.25);
  CHECK(pair.q.minus() == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(pair.q.plus() == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(pair.q0_check == doctest::Approx(3.0).epsilon(1e-15));

  CHECK_THROWS_WITH_AS(build_pair(constant_exponent(unit_grid(1, 8), 2.0), 0.6),
                       doctest::Contains("beta < dim/p_+"), ExponentError);

  const auto pair2 = build_pair(constant_exponent(unit_grid(2, 8), 2.0), 0.5);
  CHECK(pair2.q.minus() == doctest::Approx(4.0).epsilon(1e-15));

  // q(dim-beta)/dim > 1 reduces to p > 1, so it holds even for p close to 1.
  const auto near_one = build_pair(constant_exponent(unit_grid(1, 8), 1.0001), 0.9);
  CHECK(near_one.q0_check > 1.0);

  for (int dim : {1, 2}) {
    const auto p = validate_exponent(random_function(unit_grid(dim, 12), 11, 1.6, 2.4));
    const auto pr = build_pair(p, 0.3);
    CHECK((1.0 / pr.p.values() - 1.0 / pr.q.values() - 0.3 / dim).abs().maxCoeff() <= 1e-12);
    CHECK(pr.q.minus() > dim / (dim - 0.3));
  }
}

TEST_CASE("split_exponents") {
  const auto q = constant_exponent(unit_grid(1, 8), 2.0);
  const auto s = split_exponents(q, 0.5, 3.0);
  CHECK((s.q0.values() == 6.0).all());
  CHECK(s.r_conj == 1.5);
  CHECK((s.r_conj_q.values() == 3.0).all());
  CHECK(s.p0.minus() == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(s.p0.plus() == doctest::Approx(1.5).epsilon(1e-15));

  CHECK_THROWS_WITH_AS(split_exponents(q, 0.5, 2.0), doctest::Contains("r > dim/(dim-beta)"), ExponentError);

  const auto qv = validate_exponent(random_function(unit_grid(2, 10), 21, 2.0, 5.0));
  const auto sv = split_exponents(qv, 0.4, 2.5);
  CHECK((1.0 / qv.values() - 1.0 / sv.q0.values() - 1.0 / sv.r_conj_q.values()).abs().maxCoeff() <= 1e-12);
  CHECK((1.0 / sv.p0.values() - 1.0 / sv.q0.values() - 0.2).abs().maxCoeff() <= 1e-12);
}
