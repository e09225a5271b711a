#pragma once

#include "affine/fields.hpp"
#include "affine/linalg.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace affine {

/// Smooth function R^n -> R. The gradient is analytic when supplied and a
/// central difference otherwise.
template <typename Scalar>
class ScalarField {
 public:
  using Eval = std::function<Scalar(const Vector<Scalar>&)>;
  using Grad = std::function<Vector<Scalar>(const Vector<Scalar>&)>;

  ScalarField() = default;
  ScalarField(Eigen::Index n, Eval eval, Grad grad = {})
      : n_(n), eval_(std::move(eval)), grad_(std::move(grad)) {}

  Eigen::Index dim() const { return n_; }
  bool has_analytic_gradient() const { return static_cast<bool>(grad_); }

  Scalar operator()(const Vector<Scalar>& x) const {
    detail::require(x.size() == n_, "ScalarField: point dimension mismatch");
    return eval_(x);
  }

  Vector<Scalar> gradient(const Vector<Scalar>& x) const {
    detail::require(x.size() == n_, "ScalarField: point dimension mismatch");
    return grad_ ? grad_(x) : numeric_gradient(x);
  }

  /// Central differences with h = 1e-6 (1 + |x_i|).
  Vector<Scalar> numeric_gradient(const Vector<Scalar>& x) const {
    using std::abs;
    Vector<Scalar> g(n_);
    for (Eigen::Index i = 0; i < n_; ++i) {
      const Scalar h = Scalar(1e-6) * (Scalar(1) + abs(x(i)));
      Vector<Scalar> xp = x, xm = x;
      xp(i) += h;
      xm(i) -= h;
      g(i) = (eval_(xp) - eval_(xm)) / (xp(i) - xm(i));
    }
    return g;
  }

  static ScalarField constant(Eigen::Index n, Scalar c) {
    return {n, [c](const Vector<Scalar>&) { return c; },
            [n](const Vector<Scalar>&) { return Vector<Scalar>(Vector<Scalar>::Zero(n)); }};
  }
  /// x -> x_k (0-based k)
  static ScalarField coordinate(Eigen::Index n, Eigen::Index k) {
    return {n, [k](const Vector<Scalar>& x) { return x(k); },
            [n, k](const Vector<Scalar>&) {
              Vector<Scalar> g = Vector<Scalar>::Zero(n);
              g(k) = Scalar(1);
              return g;
            }};
  }

 private:
  Eigen::Index n_ = 0;
  Eval eval_;
  Grad grad_;
};

using ScalarFieldXd = ScalarField<double>;

/// X(f)(x) = grad f(x) . X(x)
template <typename Scalar>
Scalar directional_derivative(const AffineField<Scalar>& field, const ScalarField<Scalar>& f,
                              const Vector<Scalar>& x) {
  detail::require(f.dim() == field.dim(), "directional_derivative: dimension mismatch");
  return f.gradient(x).dot(evaluate(field, x));
}

/// A field with a candidate canonical parameter S (X(S) = 1) and invariants (X(I) = 0).
template <typename Scalar>
struct InvariantBundle {
  AffineField<Scalar> field;
  ScalarField<Scalar> canonical;
  std::vector<ScalarField<Scalar>> invariants;
};

using InvariantBundleXd = InvariantBundle<double>;

/// Index of the coordinate used to normalise a constant field: the first one
/// when B^1 != 0, otherwise the entry of largest magnitude.
template <typename Scalar>
Eigen::Index constant_field_pivot(const Vector<Scalar>& b) {
  using std::abs;
  if (b.size() == 0 || b.isZero(Scalar(0)))
    throw DomainError("constant field is zero: no canonical parameter exists");
  if (b(0) != Scalar(0)) return 0;
  Eigen::Index p = 0;
  b.cwiseAbs().maxCoeff(&p);
  return p;
}

/// Bundle of the constant field B built from
///   S = x^p / B^p + F(xi),  I_k = G_k(xi),  xi^i = x^i - x^p B^i / B^p  (i != p),
/// where F and every G_k are functions of the n - 1 reduced coordinates xi.
template <typename Scalar>
InvariantBundle<Scalar> constant_field_bundle(const Vector<Scalar>& b,
                                              const ScalarField<Scalar>& f,
                                              const std::vector<ScalarField<Scalar>>& gs) {
  const Eigen::Index n = b.size();
  const Eigen::Index p = constant_field_pivot(b);
  detail::require(f.dim() == n - 1, "constant_field_bundle: F must take n - 1 arguments");
  for (const auto& g : gs)
    detail::require(g.dim() == n - 1, "constant_field_bundle: G must take n - 1 arguments");

  // Reduction xi = R x, a (n-1) x n matrix.
  Matrix<Scalar> red = Matrix<Scalar>::Zero(n - 1, n);
  for (Eigen::Index i = 0, row = 0; i < n; ++i) {
    if (i == p) continue;
    red(row, i) = Scalar(1);
    red(row, p) = -b(i) / b(p);
    ++row;
  }

  const auto lift = [red](const ScalarField<Scalar>& inner, Scalar linear_coeff, Eigen::Index pivot) {
    const Eigen::Index n = red.cols();
    return ScalarField<Scalar>(
        n,
        [=](const Vector<Scalar>& x) {
          return linear_coeff * x(pivot) + inner(Vector<Scalar>(red * x));
        },
        [=](const Vector<Scalar>& x) {
          Vector<Scalar> g = red.transpose() * inner.gradient(Vector<Scalar>(red * x));
          g(pivot) += linear_coeff;
          return g;
        });
  };

  InvariantBundle<Scalar> out{AffineField<Scalar>::constant(b), lift(f, Scalar(1) / b(p), p), {}};
  for (const auto& g : gs) out.invariants.push_back(lift(g, Scalar(0), p));
  return out;
}

template <typename Scalar>
InvariantBundle<Scalar> constant_field_bundle(const Vector<Scalar>& b,
                                              const ScalarField<Scalar>& f,
                                              const ScalarField<Scalar>& g) {
  return constant_field_bundle(b, f, std::vector<ScalarField<Scalar>>{g});
}

/// Constant-field bundle with F = 0 and the n - 1 reduced coordinates as invariants.
template <typename Scalar>
InvariantBundle<Scalar> constant_field_coordinates(const Vector<Scalar>& b) {
  const Eigen::Index m = b.size() - 1;
  std::vector<ScalarField<Scalar>> gs;
  for (Eigen::Index k = 0; k < m; ++k) gs.push_back(ScalarField<Scalar>::coordinate(m, k));
  return constant_field_bundle(b, ScalarField<Scalar>::constant(m, Scalar(0)), gs);
}

/// Field a d/du + (2 b u + c) d/dv on R^2 with S = u / a and I = a v - b u^2 - c u.
/// (The linear term c u is what makes X(I) vanish when c != 0.)
template <typename Scalar>
InvariantBundle<Scalar> quadratic_shear_bundle(Scalar alpha, Scalar beta, Scalar gamma) {
  if (alpha == Scalar(0)) throw DomainError("quadratic_shear_bundle: alpha must be nonzero");
  Matrix<Scalar> c = Matrix<Scalar>::Zero(2, 2);
  c(1, 0) = Scalar(2) * beta;
  Vector<Scalar> b(2);
  b << alpha, gamma;
  ScalarField<Scalar> s(
      2, [alpha](const Vector<Scalar>& x) { return x(0) / alpha; },
      [alpha](const Vector<Scalar>&) {
        Vector<Scalar> g(2);
        g << Scalar(1) / alpha, Scalar(0);
        return g;
      });
  ScalarField<Scalar> inv(
      2,
      [=](const Vector<Scalar>& x) { return alpha * x(1) - beta * x(0) * x(0) - gamma * x(0); },
      [=](const Vector<Scalar>& x) {
        Vector<Scalar> g(2);
        g << Scalar(-2) * beta * x(0) - gamma, alpha;
        return g;
      });
  return {AffineField<Scalar>(c, b), s, {inv}};
}

/// Rows: gradients of S, I_1, ..., I_k at x.
template <typename Scalar>
Matrix<Scalar> bundle_jacobian(const InvariantBundle<Scalar>& b, const Vector<Scalar>& x) {
  const Eigen::Index n = b.field.dim();
  Matrix<Scalar> j(1 + static_cast<Eigen::Index>(b.invariants.size()), n);
  j.row(0) = b.canonical.gradient(x).transpose();
  for (std::size_t k = 0; k < b.invariants.size(); ++k)
    j.row(static_cast<Eigen::Index>(k) + 1) = b.invariants[k].gradient(x).transpose();
  return j;
}

/// (S(x), I_1(x), ..., I_k(x))
template <typename Scalar>
Vector<Scalar> bundle_coordinates(const InvariantBundle<Scalar>& b, const Vector<Scalar>& x) {
  Vector<Scalar> out(1 + static_cast<Eigen::Index>(b.invariants.size()));
  out(0) = b.canonical(x);
  for (std::size_t k = 0; k < b.invariants.size(); ++k)
    out(static_cast<Eigen::Index>(k) + 1) = b.invariants[k](x);
  return out;
}

/// In bundle coordinates the flow only translates the first slot.
template <typename Scalar>
Vector<Scalar> straightened_frame_flow(const InvariantBundle<Scalar>&, Scalar t,
                                       const Vector<Scalar>& coords) {
  Vector<Scalar> out = coords;
  if (out.size() > 0) out(0) += t;
  return out;
}

struct VerifyOptions {
  double box = 2.0;               // sample from [-box, box]^n
  double singular_radius = 1e-3;  // skip points where |X(x)| is below this
  double rank_tol = kDefaultRankTol;
  unsigned seed = 42;
};

struct VerificationReport {
  std::size_t samples = 0;
  double max_canonical_defect = 0;  // max |X(S) - 1|
  double max_invariant_defect = 0;  // max |X(I_k)|
  bool jacobian_ok = true;
  double tol = 0;

  bool passed() const {
    return samples > 0 && max_canonical_defect <= tol && max_invariant_defect <= tol && jacobian_ok;
  }
};

template <typename Scalar>
VerificationReport verify_bundle(const InvariantBundle<Scalar>& b, std::size_t sample_count,
                                 double tol, const VerifyOptions& opt = {}) {
  if (sample_count == 0) throw std::invalid_argument("verify_bundle: sample_count must be >= 1");
  const Eigen::Index n = b.field.dim();
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> coord(-opt.box, opt.box);

  VerificationReport rep;
  rep.tol = tol;
  std::size_t attempts = 0;
  while (rep.samples < sample_count && attempts < 100 * sample_count) {
    ++attempts;
    Vector<Scalar> x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = Scalar(coord(rng));
    if (static_cast<double>(evaluate(b.field, x).norm()) < opt.singular_radius) continue;
    ++rep.samples;
    using std::abs;
    rep.max_canonical_defect = std::max(
        rep.max_canonical_defect,
        static_cast<double>(abs(directional_derivative(b.field, b.canonical, x) - Scalar(1))));
    for (const auto& inv : b.invariants)
      rep.max_invariant_defect = std::max(
          rep.max_invariant_defect, static_cast<double>(abs(directional_derivative(b.field, inv, x))));
    if (rank(bundle_jacobian(b, x), Scalar(opt.rank_tol)) < static_cast<std::size_t>(n))
      rep.jacobian_ok = false;
  }
  return rep;
}

}  // namespace affine
