#include "affine/fields.hpp"

#include <doctest.h>

#include <random>

using namespace affine;

namespace {

using G = GeneratorIndex;

AffineFieldXd random_field(std::mt19937_64& rng, Eigen::Index n) {
  std::uniform_real_distribution<double> u(-2, 2);
  MatrixXd c(n, n);
  VectorXd b(n);
  for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] = u(rng);
  for (Eigen::Index i = 0; i < n; ++i) b(i) = u(rng);
  return {c, b};
}

// Bracket of two vector fields V, W given only as point maps:
// [V, W](x) = DW(x) V(x) - DV(x) W(x), with central-difference Jacobians.
// Independent of the closed-form coefficient formula.
VectorXd numeric_bracket(const AffineFieldXd& v, const AffineFieldXd& w, const VectorXd& x) {
  const Eigen::Index n = x.size();
  const double h = 1e-5;
  MatrixXd dv(n, n), dw(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    VectorXd xp = x, xm = x;
    xp(k) += h;
    xm(k) -= h;
    dv.col(k) = (evaluate(v, xp) - evaluate(v, xm)) / (2 * h);
    dw.col(k) = (evaluate(w, xp) - evaluate(w, xm)) / (2 * h);
  }
  return dw * evaluate(v, x) - dv * evaluate(w, x);
}

// Structure constants written directly from the Kronecker-delta rules.
AffineFieldXd delta_bracket(const G& x, const G& y, Eigen::Index n) {
  const auto d = [](std::size_t a, std::size_t b) { return a == b ? 1.0 : 0.0; };
  AffineFieldXd out = AffineFieldXd::zero(n);
  using K = G::Kind;
  if (x.kind == K::Constant && y.kind == K::Constant) return out;
  if (x.kind == K::Constant) {  // [E_i, E_k^j] = delta_i^j E_k
    if (d(x.i, y.j) != 0) out = generator(G::constant(y.i), n);
    return out;
  }
  if (y.kind == K::Constant) {
    if (d(y.i, x.j) != 0) out = generator(G::constant(x.i), n) * -1.0;
    return out;
  }
  // [E_a^b, E_c^d] = delta_a^d E_c^b - delta_c^b E_a^d
  if (d(x.i, y.j) != 0) out = out + generator(G::linear(y.i, x.j), n);
  if (d(y.i, x.j) != 0) out = out - generator(G::linear(x.i, y.j), n);
  return out;
}

}  // namespace

TEST_CASE("construction validates shapes and finiteness") {
  CHECK_THROWS_AS(AffineFieldXd(MatrixXd::Zero(2, 3), VectorXd::Zero(2)), DimensionError);
  CHECK_THROWS_AS(AffineFieldXd(MatrixXd::Zero(2, 2), VectorXd::Zero(3)), DimensionError);
  MatrixXd bad = MatrixXd::Zero(2, 2);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(AffineFieldXd(bad, VectorXd::Zero(2)), DomainError);
}

TEST_CASE("evaluate examples") {
  // alpha d/du + (2 beta u + gamma) d/dv with alpha = beta = 1, gamma = 0
  const AffineFieldXd shear(MatrixXd{{0, 0}, {2, 0}}, VectorXd{{1, 0}});
  CHECK(evaluate(shear, VectorXd{{5, 7}}) == VectorXd{{1, 10}});

  const AffineFieldXd f(MatrixXd{{1, 2}, {3, 4}}, VectorXd{{-1, 1}});
  CHECK(evaluate(f, VectorXd{{1, 1}}) == VectorXd{{2, 8}});
  CHECK(evaluate(AffineFieldXd::zero(3), VectorXd{{1, 2, 3}}) == VectorXd::Zero(3));
  CHECK_THROWS_AS(evaluate(f, VectorXd{{1, 2, 3}}), DimensionError);
}

TEST_CASE("classify") {
  CHECK(AffineFieldXd::zero(2).classify() == FieldClass::Constant);
  CHECK(AffineFieldXd::constant(VectorXd{{1, 0}}).classify() == FieldClass::Constant);
  CHECK(AffineFieldXd::linear(MatrixXd{{0, 1}, {0, 0}}).classify() == FieldClass::Linear);
  CHECK(AffineFieldXd(MatrixXd{{0, 1}, {0, 0}}, VectorXd{{0, 1}}).classify() == FieldClass::Affine);
  CHECK(to_string(FieldClass::Affine) == "affine");
}

TEST_CASE("bracket examples") {
  const auto e = [](const G& g, Eigen::Index n) { return generator(g, n); };
  CHECK(bracket(e(G::constant(1), 2), e(G::constant(2), 2)) == AffineFieldXd::zero(2));
  // [d/du^1, u^1 d/du^2] = d/du^2
  CHECK(bracket(e(G::constant(1), 2), e(G::linear(2, 1), 2)) == e(G::constant(2), 2));
  CHECK(bracket(e(G::linear(2, 1), 2), e(G::constant(1), 2)) == e(G::constant(2), 2) * -1.0);
  // [u^1 d/du^2, u^2 d/du^3] = u^1 d/du^3
  CHECK(bracket(e(G::linear(2, 1), 3), e(G::linear(3, 2), 3)) == e(G::linear(3, 1), 3));
  // [u^1 d/du^1, u^1 d/du^2]: X(Y u^2) - Y(X u^2) = u^1
  CHECK(bracket(e(G::linear(1, 1), 2), e(G::linear(2, 1), 2)) == e(G::linear(2, 1), 2));
  CHECK_THROWS_AS(bracket(AffineFieldXd::zero(2), AffineFieldXd::zero(3)), DimensionError);
}

TEST_CASE("bracket agrees with the finite-difference vector field bracket") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k < 200; ++k) {
    const Eigen::Index n = 1 + k % 5;
    const auto x = random_field(rng, n), y = random_field(rng, n);
    VectorXd p(n);
    for (Eigen::Index i = 0; i < n; ++i) p(i) = u(rng);
    const VectorXd want = numeric_bracket(x, y, p);
    CHECK((evaluate(bracket(x, y), p) - want).norm() <= 1e-7 * (1 + want.norm()));
  }
}

TEST_CASE("generator brackets follow the Kronecker-delta table") {
  for (Eigen::Index n = 1; n <= 4; ++n) {
    const auto gens = all_generators(static_cast<std::size_t>(n));
    for (const auto& a : gens)
      for (const auto& b : gens) {
        INFO(to_string(a), " ", to_string(b));
        CHECK(bracket(generator(a, n), generator(b, n)) == delta_bracket(a, b, n));
      }
  }
}

TEST_CASE("bracket algebra: antisymmetry, bilinearity, Jacobi") {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 200; ++k) {
    const Eigen::Index n = 1 + k % 6;
    const auto x = random_field(rng, n), y = random_field(rng, n), z = random_field(rng, n);
    CHECK(bracket(x, y).isApprox(bracket(y, x) * -1.0, 1e-12));
    CHECK(bracket(x * 2.5 + y, z).isApprox(bracket(x, z) * 2.5 + bracket(y, z), 1e-11));
    const auto jacobi = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y));
    CHECK(jacobi.isApprox(AffineFieldXd::zero(n), 1e-10));
  }
}

TEST_CASE("generators") {
  const auto e21 = generator(G::linear(2, 1), 2);
  CHECK(e21.C() == MatrixXd{{0, 0}, {1, 0}});
  CHECK(e21.B() == VectorXd::Zero(2));
  CHECK(generator(G::constant(3), 3).B() == VectorXd{{0, 0, 1}});
  CHECK(to_string(G::linear(2, 1)) == "E_2^1");
  CHECK(to_string(G::constant(3)) == "E_3");

  CHECK_THROWS_AS(generator(G::constant(0), 2), std::out_of_range);
  CHECK_THROWS_AS(generator(G::constant(3), 2), std::out_of_range);
  CHECK_THROWS_AS(generator(G::linear(1, 3), 2), std::out_of_range);

  const auto all = all_generators(2);
  REQUIRE(all.size() == 6);
  CHECK(all[0] == G::constant(1));
  CHECK(all[2] == G::linear(1, 1));
  CHECK(all[3] == G::linear(1, 2));
  CHECK(all[5] == G::linear(2, 2));
}

TEST_CASE("decompose and compose are inverse") {
  const AffineFieldXd f(MatrixXd{{0, 2}, {0, -1}}, VectorXd{{3, 0}});
  const auto terms = decompose(f);
  REQUIRE(terms.size() == 3);
  CHECK(terms[0].index == G::constant(1));
  CHECK(terms[0].coefficient == 3.0);
  CHECK(terms[1].index == G::linear(1, 2));
  CHECK(terms[2].index == G::linear(2, 2));
  CHECK(terms[2].coefficient == -1.0);

  std::mt19937_64 rng(13);
  for (int k = 0; k < 50; ++k) {
    const Eigen::Index n = 1 + k % 6;
    const auto g = random_field(rng, n);
    CHECK(compose(decompose(g), n) == g);
  }
  CHECK(decompose(AffineFieldXd::zero(3)).empty());
}

TEST_CASE("linear_change examples") {
  const AffineFieldXd f(MatrixXd{{1, 0}, {0, 2}}, VectorXd{{1, -1}});
  CHECK(linear_change(f, MatrixXd::Identity(2, 2)) == f);

  const MatrixXd swap{{0, 1}, {1, 0}};
  const auto g = linear_change(f, swap);
  CHECK(g.C() == MatrixXd{{2, 0}, {0, 1}});
  CHECK(g.B() == VectorXd{{-1, 1}});

  CHECK_THROWS_AS(linear_change(f, MatrixXd{{1, 2}, {2, 4}}), DomainError);
  CHECK_THROWS_AS(linear_change(f, MatrixXd::Identity(3, 3)), DimensionError);
}

TEST_CASE("linear_change is the pushforward and composes") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 100; ++k) {
    const Eigen::Index n = 1 + k % 5;
    const auto f = random_field(rng, n);
    MatrixXd a = MatrixXd::Identity(n, n), b = MatrixXd::Identity(n, n);
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      a.data()[i] += 0.3 * u(rng);
      b.data()[i] += 0.3 * u(rng);
    }
    VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = u(rng);
    // the field in v = a u, evaluated at a x, is a times the original at x
    const auto g = linear_change(f, a);
    CHECK((evaluate(g, VectorXd(a * x)) - a * evaluate(f, x)).norm() <= 1e-10 * (1 + evaluate(f, x).norm()));
    CHECK(linear_change(linear_change(f, a), b).isApprox(linear_change(f, MatrixXd(b * a)), 1e-9));
  }
}
