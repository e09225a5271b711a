#pragma once

#include "affine/fields.hpp"
#include "affine/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>

namespace affine {

enum class GroupKind { Translation, GeneralLinear, GeneralAffine };

inline std::string to_string(GroupKind k) {
  switch (k) {
    case GroupKind::Translation: return "T";
    case GroupKind::GeneralLinear: return "GL";
    case GroupKind::GeneralAffine: return "GA";
  }
  return "?";
}

/// Raised when a group element or tangent vector is used with an action of another group.
class KindError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kMinAbsDeterminant = 1e-12;

/// Number of group coordinates: entries y_j^i of the matrix part (row-major),
/// then entries z^i of the translation part.
inline Eigen::Index group_coordinate_count(GroupKind k, Eigen::Index n) {
  switch (k) {
    case GroupKind::Translation: return n;
    case GroupKind::GeneralLinear: return n * n;
    case GroupKind::GeneralAffine: return n * n + n;
  }
  return 0;
}

/// Element of T_n, GL(n) or GA(n) = GL(n) x| T_n. The unused part is kept at
/// its identity value (a = I for T_n, t = 0 for GL(n)).
template <typename Scalar>
class GroupElement {
 public:
  static GroupElement translation(Vector<Scalar> t) {
    const Eigen::Index n = t.size();
    return GroupElement(GroupKind::Translation, identity<Scalar>(n), std::move(t));
  }
  static GroupElement general_linear(Matrix<Scalar> a) {
    const Eigen::Index n = a.rows();
    return GroupElement(GroupKind::GeneralLinear, std::move(a), Vector<Scalar>::Zero(n));
  }
  static GroupElement general_affine(Matrix<Scalar> a, Vector<Scalar> t) {
    return GroupElement(GroupKind::GeneralAffine, std::move(a), std::move(t));
  }
  static GroupElement identity_of(GroupKind kind, Eigen::Index n) {
    return GroupElement(kind, identity<Scalar>(n), Vector<Scalar>::Zero(n));
  }

  /// Element at group coordinates identity + delta (row-major y, then z).
  static GroupElement from_offset(GroupKind kind, Eigen::Index n, const Vector<Scalar>& delta) {
    detail::require(delta.size() == group_coordinate_count(kind, n),
                    "GroupElement: coordinate offset has wrong size");
    Matrix<Scalar> a = identity<Scalar>(n);
    Vector<Scalar> t = Vector<Scalar>::Zero(n);
    Eigen::Index k = 0;
    if (kind != GroupKind::Translation)
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) += delta(k++);
    if (kind != GroupKind::GeneralLinear)
      for (Eigen::Index i = 0; i < n; ++i) t(i) += delta(k++);
    return GroupElement(kind, std::move(a), std::move(t));
  }

  GroupKind kind() const { return kind_; }
  Eigen::Index dim() const { return t_.size(); }
  const Matrix<Scalar>& a() const { return a_; }
  const Vector<Scalar>& t() const { return t_; }

  /// (a1 x| t1)(a2 x| t2) = (a1 a2) x| (a1 t2 + t1)
  GroupElement operator*(const GroupElement& o) const {
    if (kind_ != o.kind_) throw KindError("GroupElement: product of elements of different groups");
    detail::require(dim() == o.dim(), "GroupElement: dimension mismatch");
    return GroupElement(kind_, a_ * o.a_, a_ * o.t_ + t_);
  }

  GroupElement inverse() const {
    const Matrix<Scalar> ainv = a_.inverse();
    return GroupElement(kind_, ainv, -ainv * t_);
  }

 private:
  GroupElement(GroupKind kind, Matrix<Scalar> a, Vector<Scalar> t)
      : kind_(kind), a_(std::move(a)), t_(std::move(t)) {
    using std::abs;
    detail::require(a_.rows() == a_.cols() && a_.rows() == t_.size(),
                    "GroupElement: matrix and translation sizes disagree");
    if (!a_.allFinite() || !t_.allFinite()) throw DomainError("GroupElement: non-finite entries");
    if (abs(a_.determinant()) <= Scalar(kMinAbsDeterminant))
      throw DomainError("GroupElement: matrix part is singular");
  }

  GroupKind kind_;
  Matrix<Scalar> a_;
  Vector<Scalar> t_;
};

using GroupElementXd = GroupElement<double>;

/// Tangent vector at the identity, X = X_j^i d/dy_j^i + X^i d/dz^i.
template <typename Scalar>
struct TangentAtIdentity {
  GroupKind kind = GroupKind::GeneralAffine;
  Matrix<Scalar> X_mat;  // zero for T_n
  Vector<Scalar> X_vec;  // zero for GL(n)

  static TangentAtIdentity translation(Vector<Scalar> v) {
    const Eigen::Index n = v.size();
    return {GroupKind::Translation, Matrix<Scalar>::Zero(n, n), std::move(v)};
  }
  static TangentAtIdentity general_linear(Matrix<Scalar> m) {
    const Eigen::Index n = m.rows();
    return {GroupKind::GeneralLinear, std::move(m), Vector<Scalar>::Zero(n)};
  }
  static TangentAtIdentity general_affine(Matrix<Scalar> m, Vector<Scalar> v) {
    return {GroupKind::GeneralAffine, std::move(m), std::move(v)};
  }

  Eigen::Index dim() const { return X_vec.size(); }

  void validate() const {
    detail::require(X_mat.rows() == X_mat.cols() && X_mat.rows() == X_vec.size(),
                    "TangentAtIdentity: X_mat must be n x n and X_vec of size n");
    if (kind == GroupKind::Translation && !X_mat.isZero(Scalar(0)))
      throw KindError("TangentAtIdentity: T_n tangent vectors have no matrix part");
    if (kind == GroupKind::GeneralLinear && !X_vec.isZero(Scalar(0)))
      throw KindError("TangentAtIdentity: GL(n) tangent vectors have no translation part");
  }

  /// Components in the group-coordinate ordering used by GroupElement::from_offset.
  Vector<Scalar> coordinates() const {
    const Eigen::Index n = dim();
    Vector<Scalar> out(group_coordinate_count(kind, n));
    Eigen::Index k = 0;
    if (kind != GroupKind::Translation)
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) out(k++) = X_mat(i, j);
    if (kind != GroupKind::GeneralLinear)
      for (Eigen::Index i = 0; i < n; ++i) out(k++) = X_vec(i);
    return out;
  }
};

using TangentAtIdentityXd = TangentAtIdentity<double>;

// ---------------------------------------------------------------------------
// Charts

/// Open box; infinite bounds allowed.
template <typename Scalar>
struct Box {
  Vector<Scalar> lower;
  Vector<Scalar> upper;

  static Box whole(Eigen::Index n) {
    const Scalar inf = std::numeric_limits<Scalar>::infinity();
    return {Vector<Scalar>::Constant(n, -inf), Vector<Scalar>::Constant(n, inf)};
  }
  bool contains(const Vector<Scalar>& x) const {
    return x.size() == lower.size() && (x.array() > lower.array()).all() &&
           (x.array() < upper.array()).all();
  }
};

/// Diffeomorphism v of an open box of R^n onto its image, with inverse and
/// Jacobian dv/du.
template <typename Scalar>
struct Chart {
  using Map = std::function<Vector<Scalar>(const Vector<Scalar>&)>;
  using Jacobian = std::function<Matrix<Scalar>(const Vector<Scalar>&)>;

  std::string id;
  Box<Scalar> domain;
  Map forward;
  Map inverse;
  Jacobian jacobian;

  Eigen::Index dim() const { return domain.lower.size(); }
  bool contains(const Vector<Scalar>& x) const { return domain.contains(x); }

  Vector<Scalar> to_chart(const Vector<Scalar>& x) const {
    if (!contains(x)) throw DomainError("chart '" + id + "': point outside the chart domain");
    return forward(x);
  }
  Vector<Scalar> from_chart(const Vector<Scalar>& v) const {
    Vector<Scalar> x = inverse(v);
    if (!contains(x)) throw DomainError("chart '" + id + "': image point outside the chart domain");
    return x;
  }
};

using ChartXd = Chart<double>;

template <typename Scalar>
Chart<Scalar> identity_chart(Eigen::Index n) {
  return {"identity", Box<Scalar>::whole(n), [](const Vector<Scalar>& x) { return x; },
          [](const Vector<Scalar>& v) { return v; },
          [n](const Vector<Scalar>&) { return identity<Scalar>(n); }};
}

/// u^1 = scale e^{v^1}, u^k = v^k; defined on u^1 > 0.
template <typename Scalar>
Chart<Scalar> exponential_chart(Eigen::Index n, Scalar scale = Scalar(1)) {
  using std::exp;
  using std::log;
  if (!(scale > Scalar(0))) throw DomainError("exponential_chart: scale must be positive");
  Box<Scalar> dom = Box<Scalar>::whole(n);
  dom.lower(0) = Scalar(0);
  return {"exponential", dom,
          [scale](const Vector<Scalar>& x) {
            Vector<Scalar> v = x;
            v(0) = log(x(0) / scale);
            return v;
          },
          [scale](const Vector<Scalar>& v) {
            Vector<Scalar> x = v;
            x(0) = scale * exp(v(0));
            return x;
          },
          [n](const Vector<Scalar>& x) {
            Matrix<Scalar> j = identity<Scalar>(n);
            j(0, 0) = Scalar(1) / x(0);
            return j;
          }};
}

inline constexpr int kNewtonMaxIterations = 50;
inline constexpr double kNewtonResidual = 1e-12;
inline constexpr double kProductExpLowerBound = -0.9;

/// Solves u e^u = t for u > -1 by Newton iteration started right of the root;
/// u e^u is increasing and convex there, so the iterates decrease monotonically.
template <typename Scalar>
Scalar solve_product_exp(Scalar t) {
  using std::abs;
  using std::exp;
  using std::log;
  const Scalar lowest = Scalar(kProductExpLowerBound) * exp(Scalar(kProductExpLowerBound));
  if (!(t > lowest)) throw DomainError("solve_product_exp: value outside the chart image");
  Scalar u = t < Scalar(0) ? Scalar(0) : (t <= Scalar(std::exp(1.0)) ? t : log(t));
  const Scalar scale = std::max(Scalar(1), abs(t));
  for (int it = 0; it < kNewtonMaxIterations; ++it) {
    const Scalar e = exp(u);
    const Scalar step = (u * e - t) / ((u + Scalar(1)) * e);
    u -= step;
    if (abs(step) <= std::numeric_limits<Scalar>::epsilon() * (Scalar(1) + abs(u))) break;
  }
  if (abs(u * exp(u) - t) > Scalar(kNewtonResidual) * scale)
    throw DomainError("solve_product_exp: Newton iteration did not converge");
  return u;
}

/// v^1 = u^1 e^{u^1}, v^k = u^k; defined on u^1 > -0.9. The inverse uses Newton's method.
template <typename Scalar>
Chart<Scalar> product_exp_chart(Eigen::Index n) {
  using std::exp;
  Box<Scalar> dom = Box<Scalar>::whole(n);
  dom.lower(0) = Scalar(kProductExpLowerBound);
  return {"product-exp", dom,
          [](const Vector<Scalar>& x) {
            Vector<Scalar> v = x;
            v(0) = x(0) * exp(x(0));
            return v;
          },
          [](const Vector<Scalar>& v) {
            Vector<Scalar> x = v;
            x(0) = solve_product_exp(v(0));
            return x;
          },
          [n](const Vector<Scalar>& x) {
            Matrix<Scalar> j = identity<Scalar>(n);
            j(0, 0) = (x(0) + Scalar(1)) * exp(x(0));
            return j;
          }};
}

/// v = diag(d) u with every d_i nonzero.
template <typename Scalar>
Chart<Scalar> diagonal_scaling_chart(const Vector<Scalar>& d) {
  if ((d.array() == Scalar(0)).any()) throw DomainError("diagonal_scaling_chart: zero scale");
  return {"diagonal-scaling", Box<Scalar>::whole(d.size()),
          [d](const Vector<Scalar>& x) { return Vector<Scalar>(d.cwiseProduct(x)); },
          [d](const Vector<Scalar>& v) { return Vector<Scalar>(v.cwiseQuotient(d)); },
          [d](const Vector<Scalar>&) { return Matrix<Scalar>(d.asDiagonal()); }};
}

/// Registry lookup: "identity", "exponential", "product-exp", "diagonal-scaling".
/// `param` feeds the exponential scale or every diagonal entry.
template <typename Scalar>
Chart<Scalar> chart_by_name(const std::string& id, Eigen::Index n, Scalar param = Scalar(1)) {
  if (id == "identity") return identity_chart<Scalar>(n);
  if (id == "exponential") return exponential_chart<Scalar>(n, param);
  if (id == "product-exp") return product_exp_chart<Scalar>(n);
  if (id == "diagonal-scaling") return diagonal_scaling_chart<Scalar>(Vector<Scalar>::Constant(n, param));
  throw std::invalid_argument("unknown chart '" + id + "'");
}

// ---------------------------------------------------------------------------
// Actions

/// lambda(a, x) = a x
struct StandardLinear {};
/// lambda(t, x) = x + t
struct StandardTranslation {};
/// lambda(a x| t, x) = a x + t
struct StandardAffine {};
/// lambda(t, x) = x exp(s . t)
template <typename Scalar>
struct ExpTranslation {
  Vector<Scalar> s;
};
/// lambda(a, x) = a x (det a)^q
struct DetWeighted {
  int q = 0;
};

template <typename Scalar>
using CatalogAction =
    std::variant<StandardLinear, StandardTranslation, StandardAffine, ExpTranslation<Scalar>, DetWeighted>;

/// L(g, x) = v^-1(lambda(g, v(x)))
template <typename Scalar>
struct ChartConjugated {
  CatalogAction<Scalar> base;
  Chart<Scalar> chart;
};

template <typename Scalar>
GroupKind group_kind(const CatalogAction<Scalar>& a) {
  struct {
    GroupKind operator()(const StandardLinear&) const { return GroupKind::GeneralLinear; }
    GroupKind operator()(const StandardTranslation&) const { return GroupKind::Translation; }
    GroupKind operator()(const StandardAffine&) const { return GroupKind::GeneralAffine; }
    GroupKind operator()(const ExpTranslation<Scalar>&) const { return GroupKind::Translation; }
    GroupKind operator()(const DetWeighted&) const { return GroupKind::GeneralLinear; }
  } visitor;
  return std::visit(visitor, a);
}

template <typename Scalar>
std::string action_name(const CatalogAction<Scalar>& a) {
  struct {
    std::string operator()(const StandardLinear&) const { return "standard-linear"; }
    std::string operator()(const StandardTranslation&) const { return "standard-translation"; }
    std::string operator()(const StandardAffine&) const { return "standard-affine"; }
    std::string operator()(const ExpTranslation<Scalar>&) const { return "exp-translation"; }
    std::string operator()(const DetWeighted&) const { return "det-weighted"; }
  } visitor;
  return std::visit(visitor, a);
}

/// Left action of T_n, GL(n) or GA(n) on R^n from the catalog, optionally
/// conjugated by a chart.
template <typename Scalar>
class GroupAction {
 public:
  using Variant = std::variant<StandardLinear, StandardTranslation, StandardAffine,
                               ExpTranslation<Scalar>, DetWeighted, ChartConjugated<Scalar>>;

  template <typename T>
    requires(!std::is_same_v<std::decay_t<T>, GroupAction> && std::is_constructible_v<Variant, T>)
  GroupAction(T&& v) : v_(std::forward<T>(v)) {}  // NOLINT(google-explicit-constructor)
  GroupAction(const CatalogAction<Scalar>& base)  // NOLINT(google-explicit-constructor)
      : v_(std::visit([](const auto& b) -> Variant { return b; }, base)) {}

  const Variant& variant() const { return v_; }
  bool is_chart_conjugated() const { return std::holds_alternative<ChartConjugated<Scalar>>(v_); }

  /// Catalog part: the action itself, or the base of a chart-conjugated one.
  CatalogAction<Scalar> catalog() const {
    return std::visit(
        [](const auto& a) -> CatalogAction<Scalar> {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, ChartConjugated<Scalar>>)
            return a.base;
          else
            return a;
        },
        v_);
  }

  GroupKind group_kind() const { return affine::group_kind(catalog()); }

  std::string name() const {
    if (const auto* c = std::get_if<ChartConjugated<Scalar>>(&v_))
      return "chart-conjugated(" + action_name(c->base) + ", " + c->chart.id + ")";
    return action_name(catalog());
  }

  /// Points where the action can be evaluated.
  bool contains(const Vector<Scalar>& x) const {
    if (const auto* c = std::get_if<ChartConjugated<Scalar>>(&v_)) return c->chart.contains(x);
    return true;
  }

 private:
  Variant v_;
};

using GroupActionXd = GroupAction<double>;

namespace detail {

template <typename Scalar>
Vector<Scalar> act_catalog(const CatalogAction<Scalar>& action, const GroupElement<Scalar>& g,
                           const Vector<Scalar>& x) {
  using std::exp;
  using std::pow;
  if (g.kind() != group_kind(action))
    throw KindError("act: " + action_name(action) + " needs an element of " +
                    to_string(group_kind(action)) + ", got " + to_string(g.kind()));
  require(x.size() == g.dim(), "act: point dimension mismatch");
  return std::visit(
      [&](const auto& a) -> Vector<Scalar> {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, StandardLinear>) {
          return g.a() * x;
        } else if constexpr (std::is_same_v<T, StandardTranslation>) {
          return x + g.t();
        } else if constexpr (std::is_same_v<T, StandardAffine>) {
          return g.a() * x + g.t();
        } else if constexpr (std::is_same_v<T, ExpTranslation<Scalar>>) {
          require(a.s.size() == x.size(), "act: exp-translation parameter dimension mismatch");
          return x * exp(a.s.dot(g.t()));
        } else {
          return g.a() * x * pow(g.a().determinant(), a.q);
        }
      },
      action);
}

}  // namespace detail

template <typename Scalar>
Vector<Scalar> act(const GroupAction<Scalar>& action, const GroupElement<Scalar>& g,
                   const Vector<Scalar>& x) {
  if (const auto* c = std::get_if<ChartConjugated<Scalar>>(&action.variant())) {
    detail::require(x.size() == c->chart.dim(), "act: point dimension mismatch with chart");
    return c->chart.from_chart(detail::act_catalog(c->base, g, c->chart.to_chart(x)));
  }
  return detail::act_catalog(action.catalog(), g, x);
}

/// Right action of T_n by translation, rho(x, t) = x + t.
template <typename Scalar>
Vector<Scalar> act_right_translation(const Vector<Scalar>& x, const GroupElement<Scalar>& g) {
  if (g.kind() != GroupKind::Translation) throw KindError("right action needs an element of T");
  return x + g.t();
}

struct FundamentalFieldOptions {
  double h = 1e-6;
  bool richardson = false;  // combine steps h and h/2
};

namespace detail {

/// Central-difference derivative of x -> map(identity + h delta_mu) contracted with X.
template <typename Scalar, typename Map>
Vector<Scalar> differentiate_at_identity(GroupKind kind, const TangentAtIdentity<Scalar>& X,
                                         const Vector<Scalar>& x, Scalar h, const Map& map) {
  const Eigen::Index n = x.size();
  const Eigen::Index m = group_coordinate_count(kind, n);
  const Vector<Scalar> comps = X.coordinates();
  Vector<Scalar> out = Vector<Scalar>::Zero(n);
  for (Eigen::Index mu = 0; mu < m; ++mu) {
    if (comps(mu) == Scalar(0)) continue;
    Vector<Scalar> delta = Vector<Scalar>::Zero(m);
    delta(mu) = h;
    const auto plus = GroupElement<Scalar>::from_offset(kind, n, delta);
    const auto minus = GroupElement<Scalar>::from_offset(kind, n, Vector<Scalar>(-delta));
    out += comps(mu) * (map(plus, x) - map(minus, x)) / (Scalar(2) * h);
  }
  return out;
}

template <typename Scalar, typename Map>
Vector<Scalar> fundamental_numeric(GroupKind kind, const TangentAtIdentity<Scalar>& X,
                                   const Vector<Scalar>& x, const FundamentalFieldOptions& opt,
                                   const Map& map) {
  if (!(opt.h > 0 && opt.h < 1)) throw std::invalid_argument("fundamental field: h must be in (0, 1)");
  if (X.kind != kind)
    throw KindError("fundamental field: tangent vector belongs to " + to_string(X.kind) +
                    ", action group is " + to_string(kind));
  X.validate();
  require(X.dim() == x.size(), "fundamental field: tangent vector dimension mismatch");
  const Scalar h = Scalar(opt.h);
  const Vector<Scalar> d1 = differentiate_at_identity(kind, X, x, h, map);
  if (!opt.richardson) return d1;
  const Vector<Scalar> d2 = differentiate_at_identity(kind, X, x, h / Scalar(2), map);
  return (Scalar(4) * d2 - d1) / Scalar(3);
}

}  // namespace detail

/// Fundamental vector of X at x by differentiating g -> act(g, x) at the identity.
template <typename Scalar>
Vector<Scalar> fundamental_field_numeric(const GroupAction<Scalar>& action,
                                         const TangentAtIdentity<Scalar>& X, const Vector<Scalar>& x,
                                         const FundamentalFieldOptions& opt = {}) {
  if (!action.contains(x)) throw DomainError("fundamental_field_numeric: point outside the action domain");
  return detail::fundamental_numeric(
      action.group_kind(), X, x, opt,
      [&action](const GroupElement<Scalar>& g, const Vector<Scalar>& p) { return act(action, g, p); });
}

/// Same construction for the right translation action of T_n.
template <typename Scalar>
Vector<Scalar> fundamental_field_numeric_right_translation(const TangentAtIdentity<Scalar>& X,
                                                           const Vector<Scalar>& x,
                                                           const FundamentalFieldOptions& opt = {}) {
  return detail::fundamental_numeric(
      GroupKind::Translation, X, x, opt,
      [](const GroupElement<Scalar>& g, const Vector<Scalar>& p) { return act_right_translation(p, g); });
}

/// Exact fundamental field of a catalog action. Chart-conjugated actions are
/// not affine in general and are rejected.
template <typename Scalar>
AffineField<Scalar> fundamental_field_analytic(const GroupAction<Scalar>& action,
                                               const TangentAtIdentity<Scalar>& X) {
  if (action.is_chart_conjugated())
    throw std::invalid_argument("fundamental_field_analytic: chart-conjugated actions are not supported");
  if (X.kind != action.group_kind())
    throw KindError("fundamental_field_analytic: tangent vector belongs to " + to_string(X.kind) +
                    ", action group is " + to_string(action.group_kind()));
  X.validate();
  const Eigen::Index n = X.dim();
  return std::visit(
      [&](const auto& a) -> AffineField<Scalar> {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, StandardLinear>) {
          return AffineField<Scalar>::linear(X.X_mat);
        } else if constexpr (std::is_same_v<T, StandardTranslation>) {
          return AffineField<Scalar>::constant(X.X_vec);
        } else if constexpr (std::is_same_v<T, StandardAffine>) {
          return AffineField<Scalar>(X.X_mat, X.X_vec);
        } else if constexpr (std::is_same_v<T, ExpTranslation<Scalar>>) {
          detail::require(a.s.size() == n, "exp-translation parameter dimension mismatch");
          return AffineField<Scalar>::linear(X.X_vec.dot(a.s) * identity<Scalar>(n));
        } else {
          return AffineField<Scalar>::linear(X.X_mat +
                                             Scalar(a.q) * X.X_mat.trace() * identity<Scalar>(n));
        }
      },
      action.catalog());
}

/// Fundamental vector of a chart-conjugated action at x, in Cartesian
/// components: (dv/du)^-1 applied to the base field evaluated at v(x).
template <typename Scalar>
Vector<Scalar> fundamental_field_chart(const GroupAction<Scalar>& action,
                                       const TangentAtIdentity<Scalar>& X, const Vector<Scalar>& x) {
  const auto* c = std::get_if<ChartConjugated<Scalar>>(&action.variant());
  if (c == nullptr)
    return evaluate(fundamental_field_analytic(action, X), x);
  const Vector<Scalar> v = c->chart.to_chart(x);
  const AffineField<Scalar> base = fundamental_field_analytic(GroupAction<Scalar>(c->base), X);
  const Matrix<Scalar> jac = c->chart.jacobian(x);
  return jac.partialPivLu().solve(evaluate(base, v));
}

/// Tangent vector whose fundamental field is `field` for the standard action of `kind`.
template <typename Scalar>
TangentAtIdentity<Scalar> tangent_for_field(const AffineField<Scalar>& field, GroupKind kind) {
  switch (kind) {
    case GroupKind::Translation:
      if (!field.C().isZero(Scalar(0)))
        throw KindError("tangent_for_field: only constant fields come from T_n");
      return TangentAtIdentity<Scalar>::translation(field.B());
    case GroupKind::GeneralLinear:
      if (!field.B().isZero(Scalar(0)))
        throw KindError("tangent_for_field: only linear fields come from GL(n)");
      return TangentAtIdentity<Scalar>::general_linear(field.C());
    case GroupKind::GeneralAffine:
      return TangentAtIdentity<Scalar>::general_affine(field.C(), field.B());
  }
  throw KindError("tangent_for_field: unknown group");
}

/// X with X + q tr(X) I = C, i.e. X = C - q / (1 + q n) tr(C) I.
template <typename Scalar>
Matrix<Scalar> det_weighted_tangent(const Matrix<Scalar>& c, int q) {
  detail::require(c.rows() == c.cols(), "det_weighted_tangent: matrix must be square");
  const Eigen::Index n = c.rows();
  return c - Scalar(q) / (Scalar(1) + Scalar(q) * Scalar(n)) * c.trace() * identity<Scalar>(n);
}

// ---------------------------------------------------------------------------
// Axiom checks

struct ActionAxiomReport {
  std::string action;
  std::size_t samples = 0;
  double max_identity_defect = 0;
  double max_composition_defect = 0;
  double tol = 1e-9;

  bool passed() const {
    return samples > 0 && max_identity_defect <= tol && max_composition_defect <= tol;
  }
};

struct AxiomCheckOptions {
  Eigen::Index n = 2;
  double box = 2.0;           // points from [-box, box]^n intersected with the domain
  double element_scale = 0.5; // group elements are identity + scale * U(-1, 1)
  double tol = 1e-9;
  unsigned seed = 42;
};

/// Random element near the identity with |det a| >= 0.1.
template <typename Scalar, typename Rng>
GroupElement<Scalar> random_element(GroupKind kind, Eigen::Index n, double scale, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Eigen::Index m = group_coordinate_count(kind, n);
  for (;;) {
    Vector<Scalar> delta(m);
    for (Eigen::Index k = 0; k < m; ++k) delta(k) = Scalar(scale * u(rng));
    auto g = GroupElement<Scalar>::from_offset(kind, n, delta);
    using std::abs;
    if (abs(g.a().determinant()) >= Scalar(0.1)) return g;
  }
}

/// Checks lambda(e, x) = x and lambda(ab, x) = lambda(a, lambda(b, x)) at random
/// samples; defects are measured relative to 1 + |x|.
template <typename Scalar, typename Map>
ActionAxiomReport check_action_axioms(std::string name, GroupKind kind, const Box<Scalar>& domain,
                                      const Map& map, std::size_t samples,
                                      const AxiomCheckOptions& opt = {}) {
  if (samples == 0) throw std::invalid_argument("check_action_axioms: samples must be >= 1");
  const Eigen::Index n = opt.n;
  std::mt19937_64 rng(opt.seed);
  ActionAxiomReport rep;
  rep.action = std::move(name);
  rep.tol = opt.tol;

  std::size_t attempts = 0;
  while (rep.samples < samples && attempts < 100 * samples) {
    ++attempts;
    Vector<Scalar> x(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double lo = std::max(-opt.box, static_cast<double>(domain.lower(i)) + 1e-2);
      const double hi = std::min(opt.box, static_cast<double>(domain.upper(i)) - 1e-2);
      x(i) = Scalar(std::uniform_real_distribution<double>(lo, hi)(rng));
    }
    const auto a = random_element<Scalar>(kind, n, opt.element_scale, rng);
    const auto b = random_element<Scalar>(kind, n, opt.element_scale, rng);
    try {
      const Scalar scale = Scalar(1) + x.norm();
      const auto e = GroupElement<Scalar>::identity_of(kind, n);
      const Scalar id_defect = (map(e, x) - x).norm() / scale;
      const Scalar comp_defect = (map(a * b, x) - map(a, map(b, x))).norm() / scale;
      rep.max_identity_defect = std::max(rep.max_identity_defect, static_cast<double>(id_defect));
      rep.max_composition_defect = std::max(rep.max_composition_defect, static_cast<double>(comp_defect));
      ++rep.samples;
    } catch (const DomainError&) {
      // the sample left the chart image; draw another
    }
  }
  return rep;
}

template <typename Scalar>
ActionAxiomReport check_action_axioms(const GroupAction<Scalar>& action, std::size_t samples,
                                      const AxiomCheckOptions& opt = {}) {
  Box<Scalar> domain = Box<Scalar>::whole(opt.n);
  if (const auto* c = std::get_if<ChartConjugated<Scalar>>(&action.variant())) {
    detail::require(c->chart.dim() == opt.n, "check_action_axioms: chart dimension mismatch");
    domain = c->chart.domain;
  }
  return check_action_axioms<Scalar>(
      action.name(), action.group_kind(), domain,
      [&action](const GroupElement<Scalar>& g, const Vector<Scalar>& x) { return act(action, g, x); },
      samples, opt);
}

}  // namespace affine
