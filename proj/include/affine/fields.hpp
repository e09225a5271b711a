#pragma once

#include "affine/linalg.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace affine {

enum class FieldClass { Constant, Linear, Affine };

/// Vector field X = (C u + B)^i d/du^i on R^n, relative to the Cartesian chart.
template <typename Scalar>
class AffineField {
 public:
  AffineField() = default;

  AffineField(Matrix<Scalar> c, Vector<Scalar> b) : c_(std::move(c)), b_(std::move(b)) {
    detail::require(c_.rows() == c_.cols(), "AffineField: C must be square");
    detail::require(b_.size() == c_.rows(), "AffineField: B must have size n");
    if (!c_.allFinite() || !b_.allFinite())
      throw DomainError("AffineField: coefficients must be finite");
  }

  static AffineField zero(Eigen::Index n) {
    return {Matrix<Scalar>::Zero(n, n), Vector<Scalar>::Zero(n)};
  }
  static AffineField constant(Vector<Scalar> b) {
    const Eigen::Index n = b.size();
    return {Matrix<Scalar>::Zero(n, n), std::move(b)};
  }
  static AffineField linear(Matrix<Scalar> c) {
    const Eigen::Index n = c.rows();
    return {std::move(c), Vector<Scalar>::Zero(n)};
  }

  Eigen::Index dim() const { return b_.size(); }
  const Matrix<Scalar>& C() const { return c_; }
  const Vector<Scalar>& B() const { return b_; }

  FieldClass classify() const {
    if (c_.isZero(Scalar(0))) return FieldClass::Constant;
    if (b_.isZero(Scalar(0))) return FieldClass::Linear;
    return FieldClass::Affine;
  }

  AffineField operator+(const AffineField& o) const {
    detail::require(dim() == o.dim(), "AffineField: dimension mismatch");
    return {c_ + o.c_, b_ + o.b_};
  }
  AffineField operator-(const AffineField& o) const {
    detail::require(dim() == o.dim(), "AffineField: dimension mismatch");
    return {c_ - o.c_, b_ - o.b_};
  }
  AffineField operator*(Scalar k) const { return {c_ * k, b_ * k}; }
  friend AffineField operator*(Scalar k, const AffineField& f) { return f * k; }

  bool operator==(const AffineField& o) const {
    return dim() == o.dim() && c_ == o.c_ && b_ == o.b_;
  }

  bool isApprox(const AffineField& o, Scalar tol) const {
    return dim() == o.dim() && max_abs(c_ - o.c_) <= tol && max_abs(b_ - o.b_) <= tol;
  }

 private:
  Matrix<Scalar> c_;
  Vector<Scalar> b_;
};

using AffineFieldXd = AffineField<double>;

inline std::string to_string(FieldClass k) {
  switch (k) {
    case FieldClass::Constant: return "constant";
    case FieldClass::Linear: return "linear";
    case FieldClass::Affine: return "affine";
  }
  return "unknown";
}

/// Component vector C x + B of the field at x.
template <typename Scalar, typename Derived>
Vector<Scalar> evaluate(const AffineField<Scalar>& field, const Eigen::MatrixBase<Derived>& x) {
  detail::require(x.size() == field.dim(), "evaluate: point dimension mismatch");
  return field.C() * x + field.B();
}

/// Lie bracket [X, Y] with [X, Y](f) = X(Y(f)) - Y(X(f)).
template <typename Scalar>
AffineField<Scalar> bracket(const AffineField<Scalar>& x, const AffineField<Scalar>& y) {
  detail::require(x.dim() == y.dim(), "bracket: dimension mismatch");
  return {y.C() * x.C() - x.C() * y.C(), y.C() * x.B() - x.C() * y.B()};
}

/// Basis fields. Indices are 1-based: Constant{i} is d/du^i and
/// Linear{i, j} is u^j d/du^i (lower index i, upper index j).
struct GeneratorIndex {
  enum class Kind { Constant, Linear };
  Kind kind = Kind::Constant;
  std::size_t i = 1;
  std::size_t j = 0;  // unused for Constant

  static GeneratorIndex constant(std::size_t i) { return {Kind::Constant, i, 0}; }
  static GeneratorIndex linear(std::size_t i, std::size_t j) { return {Kind::Linear, i, j}; }

  bool operator==(const GeneratorIndex&) const = default;
};

inline std::string to_string(const GeneratorIndex& g) {
  if (g.kind == GeneratorIndex::Kind::Constant) return "E_" + std::to_string(g.i);
  return "E_" + std::to_string(g.i) + "^" + std::to_string(g.j);
}

template <typename Scalar = double>
AffineField<Scalar> generator(const GeneratorIndex& g, Eigen::Index n) {
  const auto in_range = [n](std::size_t k) {
    return k >= 1 && static_cast<Eigen::Index>(k) <= n;
  };
  if (!in_range(g.i) || (g.kind == GeneratorIndex::Kind::Linear && !in_range(g.j)))
    throw std::out_of_range("generator: index out of range for " + to_string(g));
  AffineField<Scalar> f = AffineField<Scalar>::zero(n);
  Matrix<Scalar> c = f.C();
  Vector<Scalar> b = f.B();
  if (g.kind == GeneratorIndex::Kind::Constant)
    b(static_cast<Eigen::Index>(g.i - 1)) = Scalar(1);
  else
    c(static_cast<Eigen::Index>(g.i - 1), static_cast<Eigen::Index>(g.j - 1)) = Scalar(1);
  return {std::move(c), std::move(b)};
}

/// All n + n^2 generators: E_1..E_n, then E_i^j with i major, j minor.
inline std::vector<GeneratorIndex> all_generators(std::size_t n) {
  std::vector<GeneratorIndex> out;
  out.reserve(n + n * n);
  for (std::size_t i = 1; i <= n; ++i) out.push_back(GeneratorIndex::constant(i));
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= n; ++j) out.push_back(GeneratorIndex::linear(i, j));
  return out;
}

template <typename Scalar>
struct GeneratorTerm {
  GeneratorIndex index;
  Scalar coefficient;
};

/// Coordinates of a field in the generator basis (nonzero terms only).
template <typename Scalar>
std::vector<GeneratorTerm<Scalar>> decompose(const AffineField<Scalar>& field) {
  std::vector<GeneratorTerm<Scalar>> out;
  const auto n = static_cast<std::size_t>(field.dim());
  for (std::size_t i = 1; i <= n; ++i) {
    const Scalar b = field.B()(static_cast<Eigen::Index>(i - 1));
    if (b != Scalar(0)) out.push_back({GeneratorIndex::constant(i), b});
  }
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= n; ++j) {
      const Scalar c = field.C()(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(j - 1));
      if (c != Scalar(0)) out.push_back({GeneratorIndex::linear(i, j), c});
    }
  return out;
}

template <typename Scalar>
AffineField<Scalar> compose(const std::vector<GeneratorTerm<Scalar>>& terms, Eigen::Index n) {
  AffineField<Scalar> out = AffineField<Scalar>::zero(n);
  for (const auto& t : terms) out = out + t.coefficient * generator<Scalar>(t.index, n);
  return out;
}

/// The same field written in the coordinates v = a u: (a C a^-1, a B).
template <typename Scalar, typename Derived>
AffineField<Scalar> linear_change(const AffineField<Scalar>& field,
                                  const Eigen::MatrixBase<Derived>& a,
                                  Scalar tol = Scalar(kDefaultRankTol)) {
  detail::require(a.rows() == field.dim() && a.cols() == field.dim(),
                  "linear_change: change matrix must be n x n");
  if (rank(a, tol) < static_cast<std::size_t>(field.dim()))
    throw DomainError("linear_change: change matrix is singular");
  const Matrix<Scalar> am = a;
  const Eigen::PartialPivLU<Matrix<Scalar>> lu(am);
  const Matrix<Scalar> ainv = lu.inverse();
  return {am * field.C() * ainv, am * field.B()};
}

}  // namespace affine
