#include "affine/flows.hpp"
#include "affine/invariants.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace affine;

namespace {

ScalarFieldXd square1() {
  return {1, [](const VectorXd& x) { return x(0) * x(0); },
          [](const VectorXd& x) { return VectorXd{{2 * x(0)}}; }};
}

ScalarFieldXd sin1() {
  return {1, [](const VectorXd& x) { return std::sin(x(0)); },
          [](const VectorXd& x) { return VectorXd{{std::cos(x(0))}}; }};
}

VectorXd random_point(std::mt19937_64& rng, Eigen::Index n, double box = 2) {
  std::uniform_real_distribution<double> u(-box, box);
  VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = u(rng);
  return x;
}

}  // namespace

TEST_CASE("directional derivative examples") {
  const AffineFieldXd shear(MatrixXd{{0, 0}, {2, 0}}, VectorXd{{1, 0}});
  const auto v = ScalarFieldXd::coordinate(2, 1);
  // X(v) = 2u
  CHECK(directional_derivative(shear, v, VectorXd{{3, 5}}) == 6.0);
  CHECK(directional_derivative(shear, ScalarFieldXd::constant(2, 4.0), VectorXd{{3, 5}}) == 0.0);
  CHECK_THROWS_AS(directional_derivative(shear, ScalarFieldXd::coordinate(3, 0), VectorXd{{1, 1}}),
                  DimensionError);
}

TEST_CASE("numeric gradient fallback matches analytic gradients") {
  const ScalarFieldXd analytic(
      2, [](const VectorXd& x) { return std::sin(x(0)) * x(1) * x(1); },
      [](const VectorXd& x) { return VectorXd{{std::cos(x(0)) * x(1) * x(1), 2 * std::sin(x(0)) * x(1)}}; });
  const ScalarFieldXd numeric(2, [](const VectorXd& x) { return std::sin(x(0)) * x(1) * x(1); });
  CHECK(analytic.has_analytic_gradient());
  CHECK_FALSE(numeric.has_analytic_gradient());
  std::mt19937_64 rng(3);
  for (int k = 0; k < 50; ++k) {
    const VectorXd x = random_point(rng, 2);
    CHECK((numeric.gradient(x) - analytic.gradient(x)).norm() <= 1e-6);
  }
}

TEST_CASE("quadratic shear bundle") {
  const double alpha = 2, beta = 0.5, gamma = -1;
  const auto b = quadratic_shear_bundle(alpha, beta, gamma);
  CHECK(b.field.C() == MatrixXd{{0, 0}, {1, 0}});
  CHECK(b.field.B() == VectorXd{{2, -1}});
  const VectorXd x{{1, 3}};
  CHECK(b.canonical(x) == 0.5);
  CHECK(b.invariants[0](x) == 2 * 3 - 0.5 - (-1) * 1);
  // X(I) = a (-2bu - c) + (2bu + c) a = 0 for every c
  CHECK(directional_derivative(b.field, b.invariants[0], VectorXd{{-0.7, 4}}) == doctest::Approx(0.0));

  const auto rep = verify_bundle(b, 200, 1e-12);
  CHECK(rep.passed());
  CHECK(rep.samples == 200);
  CHECK_THROWS_AS(quadratic_shear_bundle(0.0, 1.0, 0.0), DomainError);
}

TEST_CASE("constant field bundle with B = (2, 4)") {
  const auto b = constant_field_coordinates(VectorXd{{2, 4}});
  const VectorXd x{{3, 5}};
  CHECK(b.canonical(x) == 1.5);               // u^1 / 2
  CHECK(b.invariants[0](x) == 5 - 2.0 * 3);   // u^2 - 2 u^1
  CHECK(verify_bundle(b, 100, 1e-12).passed());
}

TEST_CASE("constant field bundle with nonlinear F and G") {
  const auto b = constant_field_bundle(VectorXd{{1, 1}}, square1(), sin1());
  const auto rep = verify_bundle(b, 100, 1e-10);
  CHECK(rep.passed());
  // S = u + (v - u)^2, I = sin(v - u)
  const VectorXd x{{0.5, 2.0}};
  CHECK(b.canonical(x) == doctest::Approx(0.5 + 2.25));
  CHECK(b.invariants[0](x) == doctest::Approx(std::sin(1.5)));
}

TEST_CASE("constant field pivot") {
  CHECK(constant_field_pivot(VectorXd{{1, 5}}) == 0);
  CHECK(constant_field_pivot(VectorXd{{0, 3, -4}}) == 2);
  CHECK_THROWS_AS(constant_field_pivot(VectorXd{{0, 0}}), DomainError);

  // B^1 = 0: S = u^2 / 3 and I = u^1
  const auto b = constant_field_coordinates(VectorXd{{0, 3}});
  const VectorXd x{{7, 6}};
  CHECK(b.canonical(x) == 2.0);
  CHECK(b.invariants[0](x) == 7.0);
  CHECK(verify_bundle(b, 50, 1e-12).passed());
  CHECK_THROWS_AS(constant_field_coordinates(VectorXd{{0, 0}}), DomainError);
}

TEST_CASE("verify_bundle detects broken bundles") {
  auto b = quadratic_shear_bundle(1.0, 1.0, 0.0);

  auto constant_inv = b;
  constant_inv.invariants = {ScalarFieldXd::constant(2, 1.0)};
  const auto r1 = verify_bundle(constant_inv, 20, 1e-9);
  CHECK_FALSE(r1.jacobian_ok);
  CHECK_FALSE(r1.passed());

  auto wrong_s = b;
  wrong_s.canonical = ScalarFieldXd::constant(2, 0.0);
  const auto r2 = verify_bundle(wrong_s, 20, 1e-9);
  CHECK(r2.max_canonical_defect == 1.0);
  CHECK_FALSE(r2.passed());

  CHECK_THROWS_AS(verify_bundle(b, 0, 1e-9), std::invalid_argument);
}

TEST_CASE("straightened frame flow") {
  const auto b = quadratic_shear_bundle(1.0, 1.0, 0.0);
  CHECK(straightened_frame_flow(b, 0.5, VectorXd{{1, 1}}) == VectorXd{{1.5, 1}});

  // bundle coordinates of the flowed point are the translated coordinates
  const auto flow = make_flow(b.field);
  std::mt19937_64 rng(19);
  for (int k = 0; k < 50; ++k) {
    const VectorXd x = random_point(rng, 2);
    const double t = std::uniform_real_distribution<double>(-1, 1)(rng);
    const VectorXd lhs = bundle_coordinates(b, flow(t, x));
    const VectorXd rhs = straightened_frame_flow(b, t, bundle_coordinates(b, x));
    CHECK((lhs - rhs).norm() <= 1e-10 * (1 + rhs.norm()));
  }
}

TEST_CASE("canonical parameters differ by invariants and invariants sum with S") {
  const auto b = constant_field_coordinates(VectorXd{{1, -2, 0.5}});
  const auto alt = constant_field_bundle(VectorXd{{1, -2, 0.5}},
                                         ScalarFieldXd(2, [](const VectorXd& xi) { return xi(0) * xi(1); }),
                                         std::vector<ScalarFieldXd>{});
  const ScalarFieldXd diff(3, [&](const VectorXd& x) { return b.canonical(x) - alt.canonical(x); });
  const ScalarFieldXd sum(3, [&](const VectorXd& x) { return b.canonical(x) + b.invariants[1](x); });
  std::mt19937_64 rng(31);
  for (int k = 0; k < 50; ++k) {
    const VectorXd x = random_point(rng, 3);
    CHECK(std::abs(directional_derivative(b.field, diff, x)) <= 1e-8);
    CHECK(std::abs(directional_derivative(b.field, sum, x) - 1) <= 1e-8);
  }
}

TEST_CASE("invariants are constant along flows") {
  const auto b = constant_field_bundle(VectorXd{{1, 1}}, square1(), sin1());
  const auto shear = quadratic_shear_bundle(1.5, -0.5, 2.0);
  std::mt19937_64 rng(37);
  for (const auto* bundle : {&b, &shear}) {
    const auto flow = make_flow(bundle->field);
    for (int k = 0; k < 50; ++k) {
      const VectorXd x = random_point(rng, 2);
      const double t = std::uniform_real_distribution<double>(-2, 2)(rng);
      const double before = bundle->invariants[0](x);
      CHECK(std::abs(bundle->invariants[0](flow(t, x)) - before) <= 1e-9 * (1 + std::abs(before)));
      CHECK(std::abs(bundle->canonical(flow(t, x)) - bundle->canonical(x) - t) <= 1e-9 * (1 + std::abs(t)));
    }
  }
}
