#pragma once

#include "affine/fields.hpp"
#include "affine/linalg.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace affine {

/// Closed form used to evaluate a flow. The exponential forms are evaluated
/// as u + (e^{tC} - I)(...) so that short times stay accurate.
enum class FlowForm {
  Translation,           // u_t = u + t B
  Exponential,           // u_t = e^{tC} u
  ShiftedExponential,    // u_t = e^{tC} (u - u~) + u~, with C u~ + B = 0
  AugmentedExponential,  // exp of [[C, B], [0, 0]] acting on (u, 1)
};

inline std::string to_string(FlowForm f) {
  switch (f) {
    case FlowForm::Translation: return "translation";
    case FlowForm::Exponential: return "exponential";
    case FlowForm::ShiftedExponential: return "shifted-exponential";
    case FlowForm::AugmentedExponential: return "augmented-exponential";
  }
  return "unknown";
}

inline constexpr double kZeroCoefficientTol = 1e-14;
inline constexpr double kFixedPointTol = 1e-10;

template <typename Scalar>
class FlowMap {
 public:
  const AffineField<Scalar>& field() const { return field_; }
  FlowForm form() const { return form_; }
  const std::optional<Vector<Scalar>>& fixed_point() const { return fixed_point_; }

  /// Image of x after time t.
  template <typename Derived>
  Vector<Scalar> operator()(Scalar t, const Eigen::MatrixBase<Derived>& x) const {
    detail::require(x.size() == field_.dim(), "flow_at: point dimension mismatch");
    if (t == Scalar(0)) return x;
    switch (form_) {
      case FlowForm::Translation:
        return x + t * field_.B();
      case FlowForm::Exponential:
        return x + mat_expm1(Matrix<Scalar>(t * field_.C())) * x;
      case FlowForm::ShiftedExponential:
        return x + mat_expm1(Matrix<Scalar>(t * field_.C())) * (x - *fixed_point_);
      case FlowForm::AugmentedExponential:
        return augmented_flow(t, x);
    }
    return x;
  }

  /// Homogeneous (n+1)-dimensional evaluation, valid for every form.
  template <typename Derived>
  Vector<Scalar> augmented_flow(Scalar t, const Eigen::MatrixBase<Derived>& x) const {
    const Eigen::Index n = field_.dim();
    Matrix<Scalar> m = Matrix<Scalar>::Zero(n + 1, n + 1);
    m.topLeftCorner(n, n) = t * field_.C();
    m.topRightCorner(n, 1) = t * field_.B();
    const Matrix<Scalar> w = mat_expm1(m);
    return x + w.topLeftCorner(n, n) * x + w.topRightCorner(n, 1);
  }

  template <typename S>
  friend FlowMap<S> make_flow(const AffineField<S>& field);
  template <typename S>
  friend FlowMap<S> make_flow_with_fixed_point(const AffineField<S>& field, Vector<S> fixed_point);
  template <typename S>
  friend FlowMap<S> make_augmented_flow(const AffineField<S>& field);

 private:
  FlowMap(AffineField<Scalar> f, FlowForm form, std::optional<Vector<Scalar>> fp)
      : field_(std::move(f)), form_(form), fixed_point_(std::move(fp)) {}

  AffineField<Scalar> field_;
  FlowForm form_ = FlowForm::Translation;
  std::optional<Vector<Scalar>> fixed_point_;
};

using FlowMapXd = FlowMap<double>;

/// Picks the closed form for the flow of `field`.
template <typename Scalar>
FlowMap<Scalar> make_flow(const AffineField<Scalar>& field) {
  const Scalar zero_tol = Scalar(kZeroCoefficientTol);
  if (max_abs(field.C()) <= zero_tol) return {field, FlowForm::Translation, std::nullopt};
  if (max_abs(field.B()) <= zero_tol) return {field, FlowForm::Exponential, std::nullopt};
  auto sol = solve_linear(field.C(), Vector<Scalar>(-field.B()));
  if (sol.solution &&
      (field.C() * *sol.solution + field.B()).norm() <= Scalar(kFixedPointTol))
    return {field, FlowForm::ShiftedExponential, std::move(sol.solution)};
  return {field, FlowForm::AugmentedExponential, std::nullopt};
}

/// Shifted-exponential flow about a caller-chosen fixed point.
template <typename Scalar>
FlowMap<Scalar> make_flow_with_fixed_point(const AffineField<Scalar>& field,
                                           Vector<Scalar> fixed_point) {
  detail::require(fixed_point.size() == field.dim(), "make_flow: fixed point dimension mismatch");
  if ((field.C() * fixed_point + field.B()).norm() > Scalar(kFixedPointTol))
    throw DomainError("make_flow: C u~ + B != 0 for the supplied fixed point");
  return {field, FlowForm::ShiftedExponential, std::move(fixed_point)};
}

/// Flow evaluated through the homogeneous embedding regardless of the field's class.
template <typename Scalar>
FlowMap<Scalar> make_augmented_flow(const AffineField<Scalar>& field) {
  return {field, FlowForm::AugmentedExponential, std::nullopt};
}

template <typename Scalar, typename Derived>
Vector<Scalar> flow_at(const FlowMap<Scalar>& f, Scalar t, const Eigen::MatrixBase<Derived>& x) {
  return f(t, x);
}

/// ||phi_{s+t}(x) - phi_s(phi_t(x))||
template <typename Scalar, typename Derived>
Scalar group_law_defect(const FlowMap<Scalar>& f, Scalar s, Scalar t,
                        const Eigen::MatrixBase<Derived>& x) {
  return (f(s + t, x) - f(s, f(t, x))).norm();
}

template <typename Scalar>
struct Orbit {
  Vector<Scalar> start;
  std::vector<Scalar> times;
  std::vector<Vector<Scalar>> points;
};

template <typename Scalar, typename Derived>
Orbit<Scalar> orbit(const FlowMap<Scalar>& f, const Eigen::MatrixBase<Derived>& x,
                    const std::vector<Scalar>& t_grid) {
  if (t_grid.empty()) throw std::invalid_argument("orbit: empty time grid");
  Orbit<Scalar> out{x, t_grid, {}};
  out.points.reserve(t_grid.size());
  for (Scalar t : t_grid) {
    if (!std::isfinite(static_cast<double>(t)))
      throw std::invalid_argument("orbit: non-finite time");
    out.points.push_back(f(t, x));
  }
  return out;
}

/// Evenly spaced grid of steps + 1 times from t0 to t1.
template <typename Scalar>
std::vector<Scalar> uniform_grid(Scalar t0, Scalar t1, std::size_t steps) {
  if (steps == 0) return {t0};
  std::vector<Scalar> out(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k)
    out[k] = t0 + (t1 - t0) * Scalar(k) / Scalar(steps);
  out.back() = t1;
  return out;
}

}  // namespace affine
