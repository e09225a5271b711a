#pragma once

#include "affine/actions.hpp"
#include "affine/fields.hpp"
#include "affine/flows.hpp"
#include "affine/invariants.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <stdexcept>
#include <string>

namespace affine::io {

using nlohmann::json;

/// Malformed or inconsistent input document.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest round-trip decimal form, at most 17 significant digits, '.' separator.
std::string format_double(double v);
/// Entries joined by single spaces.
std::string format_vector(const VectorXd& v);
/// Comma-separated list of numbers, e.g. "0,1.5,-2".
VectorXd parse_point(const std::string& text);

json read_json_file(const std::string& path);

MatrixXd matrix_from_json(const json& j, const std::string& what);
VectorXd vector_from_json(const json& j, const std::string& what);
json to_json(const MatrixXd& m);
json to_json(const VectorXd& v);

/// {"n": int, "C": [[...]], "B": [...]}
AffineFieldXd field_from_json(const json& j);
json to_json(const AffineFieldXd& f);

GroupKind group_kind_from_string(const std::string& s);

/// {"kind": "T" | "GL" | "GA", "a": [[...]], "t": [...]}
GroupElementXd element_from_json(const json& j);
json to_json(const GroupElementXd& g);

/// {"X_mat": [[...]], "X_vec": [...]}; missing parts are zero.
TangentAtIdentityXd tangent_from_json(const json& j, GroupKind kind);
json to_json(const TangentAtIdentityXd& x);

/// Action by catalog name plus parameters:
///   standard-linear | standard-translation | standard-affine
///   exp-translation {"s": [...]}
///   det-weighted {"q": int}
///   chart-conjugated {"base": name, "chart": id, "chart_param": real, "n": int, ...base params}
/// The short form "standard" picks the standard action of `group`.
GroupActionXd action_from_json(const std::string& name, const json& params,
                               std::optional<GroupKind> group = std::nullopt);

/// Scalar function from the small catalog used by bundle files:
///   {"kind": "zero"} | {"kind": "constant", "value": c} | {"kind": "slot", "index": k}
///   {"kind": "square", "index": k} | {"kind": "sin", "index": k}
///   {"kind": "linear", "coeffs": [...]} | {"kind": "polynomial", "terms": [{"coeff": c, "powers": [...]}]}
/// `index` is 1-based.
ScalarFieldXd scalar_field_from_json(const json& j, Eigen::Index n);

/// Bundle description for a given field:
///   {"family": "constant", "F": fn, "G": [fn, ...]}      (field must be constant)
///   {"family": "quadratic-shear"}                         (field a d/du + (2bu + c) d/dv)
///   {"family": "polynomial", "S": poly, "invariants": [poly, ...]}
InvariantBundleXd bundle_from_json(const AffineFieldXd& field, const json& j);

json to_json(const VerificationReport& r);
json to_json(const ActionAxiomReport& r);

/// CSV with header "t,u1,...,un".
void write_orbit_csv(std::ostream& os, const Orbit<double>& orbit);

}  // namespace affine::io
