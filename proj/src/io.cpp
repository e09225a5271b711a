#include "affine/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace affine::io {

namespace {

[[noreturn]] void fail(const std::string& what) { throw InputError(what); }

const json& member(const json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) fail(what + ": missing \"" + key + "\"");
  return j.at(key);
}

double number(const json& j, const std::string& what) {
  if (!j.is_number()) fail(what + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(what + ": non-finite number");
  return v;
}

Eigen::Index index_from_json(const json& j, Eigen::Index n, const std::string& what) {
  if (!j.is_number_integer()) fail(what + ": expected an integer index");
  const auto k = j.get<long long>();
  if (k < 1 || k > n) fail(what + ": index out of range 1.." + std::to_string(n));
  return static_cast<Eigen::Index>(k - 1);
}

ScalarFieldXd polynomial_from_json(const json& j, Eigen::Index n) {
  const json& terms = member(j, "terms", "polynomial");
  if (!terms.is_array()) fail("polynomial: \"terms\" must be an array");
  std::vector<double> coeffs;
  std::vector<std::vector<int>> powers;
  for (const auto& t : terms) {
    coeffs.push_back(number(member(t, "coeff", "polynomial term"), "polynomial coeff"));
    const json& p = member(t, "powers", "polynomial term");
    if (!p.is_array() || static_cast<Eigen::Index>(p.size()) != n)
      fail("polynomial: \"powers\" must have one entry per coordinate");
    std::vector<int> row;
    for (const auto& e : p) {
      if (!e.is_number_integer() || e.get<int>() < 0) fail("polynomial: powers must be nonnegative integers");
      row.push_back(e.get<int>());
    }
    powers.push_back(std::move(row));
  }
  const auto monomial = [](const VectorXd& x, const std::vector<int>& pw, Eigen::Index skip) {
    double m = 1.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const int e = pw[static_cast<std::size_t>(i)] - (i == skip ? 1 : 0);
      m *= std::pow(x(i), e);
    }
    return m;
  };
  return {n,
          [=](const VectorXd& x) {
            double s = 0.0;
            for (std::size_t k = 0; k < coeffs.size(); ++k) s += coeffs[k] * monomial(x, powers[k], -1);
            return s;
          },
          [=](const VectorXd& x) {
            VectorXd g = VectorXd::Zero(n);
            for (std::size_t k = 0; k < coeffs.size(); ++k)
              for (Eigen::Index i = 0; i < n; ++i) {
                const int e = powers[k][static_cast<std::size_t>(i)];
                if (e > 0) g(i) += coeffs[k] * e * monomial(x, powers[k], i);
              }
            return g;
          }};
}

}  // namespace

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

std::string format_vector(const VectorXd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += format_double(v(i));
  }
  return out;
}

VectorXd parse_point(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) fail("point: empty coordinate in \"" + text + "\"");
    const std::string tok = item.substr(first, last - first + 1);
    double v = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || !std::isfinite(v))
      fail("point: cannot parse \"" + tok + "\"");
    vals.push_back(v);
  }
  if (vals.empty()) fail("point: no coordinates");
  return Eigen::Map<VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(path + ": " + e.what());
  }
}

MatrixXd matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) fail(what + ": expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return MatrixXd(0, 0);
  if (!j[0].is_array()) fail(what + ": expected an array of rows");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      fail(what + ": rows have different lengths");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = number(row[static_cast<std::size_t>(k)], what);
  }
  return m;
}

VectorXd vector_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) fail(what + ": expected an array");
  VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = number(j[static_cast<std::size_t>(i)], what);
  return v;
}

json to_json(const MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

AffineFieldXd field_from_json(const json& j) {
  const json& nj = member(j, "n", "field");
  if (!nj.is_number_integer() || nj.get<long long>() < 1) fail("field: \"n\" must be a positive integer");
  const auto n = static_cast<Eigen::Index>(nj.get<long long>());
  MatrixXd c = j.contains("C") ? matrix_from_json(j["C"], "field C") : MatrixXd::Zero(n, n);
  VectorXd b = j.contains("B") ? vector_from_json(j["B"], "field B") : VectorXd::Zero(n);
  if (c.rows() != n || c.cols() != n) fail("field: C must be n x n");
  if (b.size() != n) fail("field: B must have n entries");
  return {std::move(c), std::move(b)};
}

json to_json(const AffineFieldXd& f) {
  return json{{"n", f.dim()}, {"C", to_json(f.C())}, {"B", to_json(f.B())}};
}

GroupKind group_kind_from_string(const std::string& s) {
  if (s == "T" || s == "translation") return GroupKind::Translation;
  if (s == "GL" || s == "general-linear") return GroupKind::GeneralLinear;
  if (s == "GA" || s == "general-affine") return GroupKind::GeneralAffine;
  fail("unknown group \"" + s + "\" (expected T, GL or GA)");
}

GroupElementXd element_from_json(const json& j) {
  const json& kj = member(j, "kind", "group element");
  if (!kj.is_string()) fail("group element: \"kind\" must be a string");
  const GroupKind kind = group_kind_from_string(kj.get<std::string>());
  try {
    switch (kind) {
      case GroupKind::Translation:
        return GroupElementXd::translation(vector_from_json(member(j, "t", "group element"), "t"));
      case GroupKind::GeneralLinear:
        return GroupElementXd::general_linear(matrix_from_json(member(j, "a", "group element"), "a"));
      case GroupKind::GeneralAffine:
        return GroupElementXd::general_affine(matrix_from_json(member(j, "a", "group element"), "a"),
                                              vector_from_json(member(j, "t", "group element"), "t"));
    }
  } catch (const std::logic_error& e) {
    fail(std::string("group element: ") + e.what());
  }
  fail("group element: unknown kind");
}

json to_json(const GroupElementXd& g) {
  json out{{"kind", to_string(g.kind())}};
  if (g.kind() != GroupKind::Translation) out["a"] = to_json(g.a());
  if (g.kind() != GroupKind::GeneralLinear) out["t"] = to_json(g.t());
  return out;
}

TangentAtIdentityXd tangent_from_json(const json& j, GroupKind kind) {
  if (!j.is_object()) fail("tangent vector: expected an object");
  const bool has_mat = j.contains("X_mat");
  const bool has_vec = j.contains("X_vec");
  if (!has_mat && !has_vec) fail("tangent vector: needs \"X_mat\" and/or \"X_vec\"");
  MatrixXd m = has_mat ? matrix_from_json(j["X_mat"], "X_mat") : MatrixXd();
  VectorXd v = has_vec ? vector_from_json(j["X_vec"], "X_vec") : VectorXd();
  const Eigen::Index n = has_vec ? v.size() : m.rows();
  if (!has_mat) m = MatrixXd::Zero(n, n);
  if (!has_vec) v = VectorXd::Zero(n);
  TangentAtIdentityXd x{kind, std::move(m), std::move(v)};
  try {
    x.validate();
  } catch (const std::logic_error& e) {
    fail(std::string("tangent vector: ") + e.what());
  }
  return x;
}

json to_json(const TangentAtIdentityXd& x) {
  return json{{"kind", to_string(x.kind)}, {"X_mat", to_json(x.X_mat)}, {"X_vec", to_json(x.X_vec)}};
}

namespace {

CatalogAction<double> catalog_from_json(const std::string& name, const json& params,
                                        std::optional<GroupKind> group) {
  if (name == "standard") {
    if (!group) fail("action \"standard\" needs a group (T, GL or GA)");
    switch (*group) {
      case GroupKind::Translation: return StandardTranslation{};
      case GroupKind::GeneralLinear: return StandardLinear{};
      case GroupKind::GeneralAffine: return StandardAffine{};
    }
  }
  if (name == "standard-linear") return StandardLinear{};
  if (name == "standard-translation") return StandardTranslation{};
  if (name == "standard-affine") return StandardAffine{};
  if (name == "exp-translation")
    return ExpTranslation<double>{vector_from_json(member(params, "s", "exp-translation"), "s")};
  if (name == "det-weighted") {
    const json& q = member(params, "q", "det-weighted");
    if (!q.is_number_integer() || q.get<int>() < 0) fail("det-weighted: \"q\" must be a nonnegative integer");
    return DetWeighted{q.get<int>()};
  }
  fail("unknown action \"" + name + "\"");
}

}  // namespace

GroupActionXd action_from_json(const std::string& name, const json& params,
                               std::optional<GroupKind> group) {
  const json p = params.is_null() ? json::object() : params;
  if (!p.is_object()) fail("action parameters must be a JSON object");
  if (name != "chart-conjugated") {
    GroupActionXd a(catalog_from_json(name, p, group));
    if (group && a.group_kind() != *group)
      fail("action \"" + name + "\" acts with " + to_string(a.group_kind()) + ", not " + to_string(*group));
    return a;
  }
  const json& base = member(p, "base", "chart-conjugated");
  const json& chart = member(p, "chart", "chart-conjugated");
  const json& nj = member(p, "n", "chart-conjugated");
  if (!base.is_string() || !chart.is_string() || !nj.is_number_integer() || nj.get<long long>() < 1)
    fail("chart-conjugated: \"base\" and \"chart\" must be strings, \"n\" a positive integer");
  const double param = p.contains("chart_param") ? number(p["chart_param"], "chart_param") : 1.0;
  const auto base_action = catalog_from_json(base.get<std::string>(), p, group);
  try {
    auto c = chart_by_name<double>(chart.get<std::string>(), nj.get<Eigen::Index>(), param);
    GroupActionXd a(ChartConjugated<double>{base_action, std::move(c)});
    if (group && a.group_kind() != *group) fail("chart-conjugated: base action group mismatch");
    return a;
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    fail(std::string("chart-conjugated: ") + e.what());
  }
}

ScalarFieldXd scalar_field_from_json(const json& j, Eigen::Index n) {
  const json& kj = member(j, "kind", "scalar function");
  if (!kj.is_string()) fail("scalar function: \"kind\" must be a string");
  const std::string kind = kj.get<std::string>();
  if (kind == "zero") return ScalarFieldXd::constant(n, 0.0);
  if (kind == "constant") return ScalarFieldXd::constant(n, number(member(j, "value", kind), "value"));
  if (kind == "slot") return ScalarFieldXd::coordinate(n, index_from_json(member(j, "index", kind), n, kind));
  if (kind == "square") {
    const Eigen::Index k = index_from_json(member(j, "index", kind), n, kind);
    return {n, [k](const VectorXd& x) { return x(k) * x(k); },
            [n, k](const VectorXd& x) {
              VectorXd g = VectorXd::Zero(n);
              g(k) = 2.0 * x(k);
              return g;
            }};
  }
  if (kind == "sin") {
    const Eigen::Index k = index_from_json(member(j, "index", kind), n, kind);
    return {n, [k](const VectorXd& x) { return std::sin(x(k)); },
            [n, k](const VectorXd& x) {
              VectorXd g = VectorXd::Zero(n);
              g(k) = std::cos(x(k));
              return g;
            }};
  }
  if (kind == "linear") {
    const VectorXd w = vector_from_json(member(j, "coeffs", kind), "coeffs");
    if (w.size() != n) fail("linear: \"coeffs\" must have " + std::to_string(n) + " entries");
    return {n, [w](const VectorXd& x) { return w.dot(x); }, [w](const VectorXd&) { return w; }};
  }
  if (kind == "polynomial") return polynomial_from_json(j, n);
  fail("unknown scalar function kind \"" + kind + "\"");
}

InvariantBundleXd bundle_from_json(const AffineFieldXd& field, const json& j) {
  const json& fam = member(j, "family", "bundle");
  if (!fam.is_string()) fail("bundle: \"family\" must be a string");
  const std::string family = fam.get<std::string>();
  const Eigen::Index n = field.dim();

  if (family == "constant") {
    if (field.classify() != FieldClass::Constant) fail("bundle: family \"constant\" needs a constant field");
    const ScalarFieldXd f = j.contains("F") ? scalar_field_from_json(j["F"], n - 1)
                                            : ScalarFieldXd::constant(n - 1, 0.0);
    std::vector<ScalarFieldXd> gs;
    if (j.contains("G")) {
      if (!j["G"].is_array()) fail("bundle: \"G\" must be an array");
      for (const auto& g : j["G"]) gs.push_back(scalar_field_from_json(g, n - 1));
    }
    try {
      return j.contains("G") ? constant_field_bundle(field.B(), f, gs) : constant_field_coordinates(field.B());
    } catch (const DomainError& e) {
      fail(std::string("bundle: ") + e.what());
    }
  }
  if (family == "quadratic-shear") {
    const MatrixXd& c = field.C();
    if (n != 2 || c(0, 0) != 0.0 || c(0, 1) != 0.0 || c(1, 1) != 0.0 || field.B()(0) == 0.0)
      fail("bundle: family \"quadratic-shear\" needs a field a d/du + (2bu + c) d/dv with a != 0");
    return quadratic_shear_bundle(field.B()(0), c(1, 0) / 2.0, field.B()(1));
  }
  if (family == "polynomial") {
    InvariantBundleXd b{field, polynomial_from_json(member(j, "S", "bundle"), n), {}};
    if (j.contains("invariants")) {
      if (!j["invariants"].is_array()) fail("bundle: \"invariants\" must be an array");
      for (const auto& inv : j["invariants"]) b.invariants.push_back(polynomial_from_json(inv, n));
    }
    return b;
  }
  fail("bundle: unknown family \"" + family + "\"");
}

json to_json(const VerificationReport& r) {
  return json{{"samples", r.samples},
              {"max_canonical_defect", r.max_canonical_defect},
              {"max_invariant_defect", r.max_invariant_defect},
              {"jacobian_ok", r.jacobian_ok},
              {"tol", r.tol},
              {"passed", r.passed()}};
}

json to_json(const ActionAxiomReport& r) {
  return json{{"action", r.action},
              {"samples", r.samples},
              {"max_identity_defect", r.max_identity_defect},
              {"max_composition_defect", r.max_composition_defect},
              {"tol", r.tol},
              {"passed", r.passed()}};
}

void write_orbit_csv(std::ostream& os, const Orbit<double>& orbit) {
  os << 't';
  for (Eigen::Index i = 1; i <= orbit.start.size(); ++i) os << ",u" << i;
  os << '\n';
  for (std::size_t k = 0; k < orbit.times.size(); ++k) {
    os << format_double(orbit.times[k]);
    for (Eigen::Index i = 0; i < orbit.points[k].size(); ++i) os << ',' << format_double(orbit.points[k](i));
    os << '\n';
  }
}

}  // namespace affine::io
