#pragma once

#include "affine/fields.hpp"
#include "affine/linalg.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace affine {

/// Raised when the integrated state stops being finite.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

inline constexpr double kDefaultOdeStep = 1e-3;

/// Autonomous initial-value problem du/dt = rhs(u), u(0) = start, solved on [0, t_end].
template <typename Scalar>
struct OdeProblem {
  std::function<Vector<Scalar>(const Vector<Scalar>&)> rhs;
  Vector<Scalar> start;
  Scalar t_end = Scalar(0);
  Scalar step = Scalar(kDefaultOdeStep);
};

/// Integral-curve problem of an affine field. Only evaluate() is used, so the
/// oracle never touches the closed-form flows.
template <typename Scalar>
OdeProblem<Scalar> integral_curve_problem(const AffineField<Scalar>& field, Vector<Scalar> start,
                                          Scalar t_end, Scalar step = Scalar(kDefaultOdeStep)) {
  detail::require(start.size() == field.dim(), "integral_curve_problem: start dimension mismatch");
  return {[field](const Vector<Scalar>& u) { return evaluate(field, u); }, std::move(start), t_end,
          step};
}

/// Classical fixed-step RK4. The step sign follows t_end; the last step is
/// shortened to land on t_end exactly.
template <typename Scalar>
Vector<Scalar> integrate(const OdeProblem<Scalar>& p) {
  using std::abs;
  if (!(p.step > Scalar(0))) throw std::invalid_argument("integrate: step must be positive");
  if (!p.rhs) throw std::invalid_argument("integrate: missing right-hand side");

  Vector<Scalar> u = p.start;
  if (p.t_end == Scalar(0)) return u;

  const Scalar dir = p.t_end > Scalar(0) ? Scalar(1) : Scalar(-1);
  const Scalar span = abs(p.t_end);
  const auto full_steps = static_cast<long long>(std::floor(span / p.step));
  Scalar done = Scalar(0);

  const auto advance = [&](Scalar h) {
    const Vector<Scalar> k1 = p.rhs(u);
    const Vector<Scalar> k2 = p.rhs(u + (h / 2) * k1);
    const Vector<Scalar> k3 = p.rhs(u + (h / 2) * k2);
    const Vector<Scalar> k4 = p.rhs(u + h * k3);
    u += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
    if (!u.allFinite())
      throw DivergenceError("integrate: state became non-finite",
                            static_cast<double>(dir * (done + abs(h))));
  };

  for (long long k = 0; k < full_steps; ++k) {
    advance(dir * p.step);
    done = p.step * Scalar(k + 1);
  }
  const Scalar rest = span - p.step * Scalar(full_steps);
  if (rest > Scalar(0)) advance(dir * rest);
  return u;
}

}  // namespace affine
