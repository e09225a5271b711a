#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace affine {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;

/// Raised when operand shapes do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an input lies outside the set on which an operation is defined
/// (singular matrices, points outside a chart, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr double kDefaultExpTol = 1e-12;
inline constexpr double kDefaultRankTol = 1e-10;

namespace detail {

inline void require(bool cond, const std::string& what) {
  if (!cond) throw DimensionError(what);
}

}  // namespace detail

template <typename Scalar>
Matrix<Scalar> identity(Eigen::Index n) {
  return Matrix<Scalar>::Identity(n, n);
}

/// Max-abs entry; zero for empty objects.
template <typename Derived>
typename Derived::Scalar max_abs(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  return m.size() == 0 ? Scalar(0) : m.cwiseAbs().maxCoeff();
}

/// e^A - I by scaling and squaring around a truncated Taylor core.
///
/// The argument is scaled by 2^-s so that its 1-norm is at most 1/2, the
/// series sum_{k>=1} A^k / k! is summed until the next term drops below
/// tol / (10 * 2^s) relative to the partial sum (never below machine
/// precision), and W = e^A - I is squared back with W <- W (W + 2I).
/// Working with W instead of e^A keeps small-argument results accurate.
template <typename Derived>
Matrix<typename Derived::Scalar> mat_expm1(const Eigen::MatrixBase<Derived>& a,
                                           typename Derived::Scalar tol = kDefaultExpTol) {
  using Scalar = typename Derived::Scalar;
  using std::ceil;
  using std::log2;
  using std::max;
  detail::require(a.rows() == a.cols(), "mat_exp: matrix must be square");
  if (!(tol > Scalar(0))) throw std::invalid_argument("mat_exp: tol must be positive");

  const Eigen::Index n = a.rows();
  Matrix<Scalar> result = Matrix<Scalar>::Zero(n, n);
  if (n == 0 || a.isZero(Scalar(0))) return result;

  const Scalar norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > Scalar(0.5)) squarings = static_cast<int>(ceil(log2(norm1 / Scalar(0.5))));
  const Matrix<Scalar> scaled = a / std::ldexp(Scalar(1), squarings);

  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  const Scalar term_tol = max(tol / (Scalar(10) * std::ldexp(Scalar(1), squarings)), eps);

  Matrix<Scalar> term = identity<Scalar>(n);
  for (int k = 1; k <= 60; ++k) {
    term = (term * scaled / Scalar(k)).eval();
    result += term;
    if (max_abs(term) <= term_tol * max_abs(result)) break;
  }
  for (int s = 0; s < squarings; ++s) {
    Matrix<Scalar> shifted = result;
    shifted.diagonal().array() += Scalar(2);
    result = (result * shifted).eval();
  }
  return result;
}

/// Matrix exponential e^A, exactly the identity for A = 0.
template <typename Derived>
Matrix<typename Derived::Scalar> mat_exp(const Eigen::MatrixBase<Derived>& a,
                                         typename Derived::Scalar tol = kDefaultExpTol) {
  Matrix<typename Derived::Scalar> e = mat_expm1(a, tol);
  e.diagonal().array() += typename Derived::Scalar(1);
  return e;
}

/// Numerical rank: singular values above tol times the largest one.
template <typename Derived>
std::size_t rank(const Eigen::MatrixBase<Derived>& a,
                 typename Derived::Scalar tol = kDefaultRankTol) {
  using Scalar = typename Derived::Scalar;
  if (!(tol > Scalar(0))) throw std::invalid_argument("rank: tol must be positive");
  if (a.size() == 0) return 0;
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::JacobiSVD<Dense> svd{Dense(a)};
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == Scalar(0)) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * sv(0)) ++r;
  return r;
}

template <typename Scalar>
struct LinearSolution {
  std::optional<Vector<Scalar>> solution;  // empty: rhs not in range(C)
  std::size_t rank = 0;

  bool solvable() const { return solution.has_value(); }
};

/// Solves C x = rhs for square C, tolerating rank deficiency.
///
/// Returns the minimum-norm solution of the truncated system when rhs lies in
/// range(C) up to ||C x - rhs|| <= tol (1 + ||rhs||).
template <typename DerivedA, typename DerivedB>
LinearSolution<typename DerivedA::Scalar> solve_linear(
    const Eigen::MatrixBase<DerivedA>& c, const Eigen::MatrixBase<DerivedB>& rhs,
    typename DerivedA::Scalar tol = kDefaultRankTol) {
  using Scalar = typename DerivedA::Scalar;
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  detail::require(c.rows() == c.cols(), "solve_linear: matrix must be square");
  detail::require(rhs.size() == c.rows(), "solve_linear: rhs dimension mismatch");

  LinearSolution<Scalar> out;
  const Eigen::Index n = c.rows();
  if (n == 0) {
    out.solution = Vector<Scalar>(0);
    return out;
  }
  const Eigen::JacobiSVD<Dense> svd{Dense(c), Eigen::ComputeFullU | Eigen::ComputeFullV};
  const auto& sv = svd.singularValues();
  const Scalar cutoff = tol * sv(0);
  Vector<Scalar> coeffs = svd.matrixU().transpose() * rhs;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (sv(i) > cutoff && sv(i) > Scalar(0)) {
      coeffs(i) /= sv(i);
      ++out.rank;
    } else {
      coeffs(i) = Scalar(0);
    }
  }
  Vector<Scalar> x = svd.matrixV() * coeffs;
  const Scalar residual = (c * x - rhs).norm();
  if (residual <= tol * (Scalar(1) + rhs.norm())) out.solution = std::move(x);
  return out;
}

/// Orthonormal basis of ker(C) as columns, using the same threshold as rank().
template <typename Derived>
Matrix<typename Derived::Scalar> null_space(const Eigen::MatrixBase<Derived>& c,
                                            typename Derived::Scalar tol = kDefaultRankTol) {
  using Scalar = typename Derived::Scalar;
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = c.cols();
  if (c.size() == 0) return identity<Scalar>(n);
  const Eigen::JacobiSVD<Dense> svd{Dense(c), Eigen::ComputeFullV};
  const auto& sv = svd.singularValues();
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(0) > Scalar(0) && sv(i) > tol * sv(0)) ++r;
  return svd.matrixV().rightCols(n - r);
}

}  // namespace affine
