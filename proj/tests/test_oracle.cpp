#include "affine/oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace affine;

TEST_CASE("constant fields are integrated exactly, including the shortened last step") {
  const auto f = AffineFieldXd::constant(VectorXd{{1, -2}});
  CHECK(integrate(integral_curve_problem(f, VectorXd{{0, 0}}, 3.0)).isApprox(VectorXd{{3, -6}}, 1e-13));
  const VectorXd odd = integrate(integral_curve_problem(f, VectorXd{{1, 1}}, 0.0025));
  CHECK(odd(0) == doctest::Approx(1.0025).epsilon(1e-15));
  CHECK(odd(1) == doctest::Approx(0.995).epsilon(1e-15));
}

TEST_CASE("shear field from the origin reaches (2, 4) at t = 2") {
  const AffineFieldXd shear(MatrixXd{{0, 0}, {2, 0}}, VectorXd{{1, 0}});
  const VectorXd u = integrate(integral_curve_problem(shear, VectorXd{{0, 0}}, 2.0));
  CHECK(std::abs(u(0) - 2) <= 1e-9);
  CHECK(std::abs(u(1) - 4) <= 1e-9);
}

TEST_CASE("hyperbolic linear field") {
  const auto f = AffineFieldXd::linear(MatrixXd{{1, 0}, {0, -1}});
  const VectorXd u = integrate(integral_curve_problem(f, VectorXd{{1, 1}}, 1.0));
  CHECK(u(0) == doctest::Approx(std::exp(1.0)).epsilon(1e-11));
  CHECK(u(1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-11));
}

TEST_CASE("negative end time runs backwards") {
  const auto f = AffineFieldXd::linear(MatrixXd{{1}});
  const VectorXd u = integrate(integral_curve_problem(f, VectorXd{{1}}, -2.0));
  CHECK(u(0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-11));
  CHECK(integrate(integral_curve_problem(f, VectorXd{{3}}, 0.0)) == VectorXd{{3}});
}

TEST_CASE("RK4 error shrinks at fourth order") {
  const auto f = AffineFieldXd::linear(MatrixXd{{0, 1}, {-1, 0}});
  const VectorXd exact{{std::cos(2.0), -std::sin(2.0)}};
  const double e1 = (integrate(integral_curve_problem(f, VectorXd{{1, 0}}, 2.0, 0.1)) - exact).norm();
  const double e2 = (integrate(integral_curve_problem(f, VectorXd{{1, 0}}, 2.0, 0.05)) - exact).norm();
  CHECK(std::log2(e1 / e2) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("blow-up is reported as divergence") {
  // u' = u^2 from u = 1 explodes at t = 1
  OdeProblem<double> p{[](const VectorXd& u) { return VectorXd(u.array().square()); }, VectorXd{{1}}, 2.0,
                       1e-3};
  CHECK_THROWS_AS(integrate(p), DivergenceError);
  try {
    integrate(p);
  } catch (const DivergenceError& e) {
    CHECK(e.time() > 0.99);
    CHECK(e.time() <= 2.0);
  }
}

TEST_CASE("invalid problems are rejected") {
  const auto f = AffineFieldXd::zero(2);
  CHECK_THROWS_AS(integrate(integral_curve_problem(f, VectorXd{{0, 0}}, 1.0, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(integrate(integral_curve_problem(f, VectorXd{{0, 0}}, 1.0, -1e-3)), std::invalid_argument);
  CHECK_THROWS_AS(integral_curve_problem(f, VectorXd{{0}}, 1.0), DimensionError);
  CHECK_THROWS_AS(integrate(OdeProblem<double>{}), std::invalid_argument);
}
