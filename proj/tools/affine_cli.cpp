// Command-line front end: flows, orbits, brackets, fundamental fields,
// invariant verification, action axiom checks and the validation suites.
//
// Exit status: 0 success, 1 validation failure, 2 input error.

#include "affine/actions.hpp"
#include "affine/fields.hpp"
#include "affine/flows.hpp"
#include "affine/invariants.hpp"
#include "affine/io.hpp"
#include "affine/oracle.hpp"
#include "affine/validation.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace affine;
using io::json;

constexpr int kOk = 0;
constexpr int kValidationFailure = 1;
constexpr int kInputError = 2;

void print_vector(const VectorXd& v, const std::string& format) {
  if (format == "json")
    std::cout << io::to_json(v).dump() << '\n';
  else
    std::cout << io::format_vector(v) << '\n';
}

VectorXd point_or_origin(const std::string& text, Eigen::Index n) {
  if (text.empty()) return VectorXd::Zero(n);
  VectorXd p = io::parse_point(text);
  if (p.size() != n)
    throw io::InputError("point has " + std::to_string(p.size()) + " coordinates, field has dimension " +
                         std::to_string(n));
  return p;
}

json params_or_empty(const std::string& path) { return path.empty() ? json::object() : io::read_json_file(path); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flows, brackets, invariants and fundamental fields of affine vector fields on R^n"};
  app.require_subcommand(1);

  std::string field_path, point, format = "text";
  double t = 0;
  auto* flow_cmd = app.add_subcommand("flow", "Image of a point under the flow of a field");
  flow_cmd->add_option("--field", field_path, "Field JSON {n, C, B}")->required();
  flow_cmd->add_option("--t", t, "Flow time")->required();
  flow_cmd->add_option("--point", point, "Comma-separated start point (default: origin)");
  flow_cmd->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  bool show_form = false;
  flow_cmd->add_flag("--show-form", show_form, "Print the closed form used on stderr");

  double t0 = 0, t1 = 1;
  std::size_t steps = 100;
  auto* orbit_cmd = app.add_subcommand("orbit", "CSV orbit t,u1,...,un on a uniform time grid");
  orbit_cmd->add_option("--field", field_path, "Field JSON")->required();
  orbit_cmd->add_option("--t0", t0, "First time");
  orbit_cmd->add_option("--t1", t1, "Last time");
  orbit_cmd->add_option("--steps", steps, "Number of intervals (steps + 1 rows)");
  orbit_cmd->add_option("--point", point, "Comma-separated start point (default: origin)");

  double step = kDefaultOdeStep;
  auto* integrate_cmd = app.add_subcommand("integrate", "RK4 oracle: integrate the integral-curve ODE");
  integrate_cmd->add_option("--field", field_path, "Field JSON")->required();
  integrate_cmd->add_option("--t", t, "End time")->required();
  integrate_cmd->add_option("--step", step, "Fixed step")->check(CLI::PositiveNumber);
  integrate_cmd->add_option("--point", point, "Comma-separated start point (default: origin)");
  integrate_cmd->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  std::string x_path, y_path;
  auto* bracket_cmd = app.add_subcommand("bracket", "Lie bracket [X, Y] of two fields as JSON");
  bracket_cmd->add_option("--x", x_path, "Field JSON for X")->required();
  bracket_cmd->add_option("--y", y_path, "Field JSON for Y")->required();

  std::string group, action_name = "standard", tangent_path, params_path;
  auto* fundamental_cmd = app.add_subcommand("fundamental", "Fundamental vector field of a tangent vector");
  fundamental_cmd->add_option("--group", group, "T, GL or GA")->required();
  fundamental_cmd->add_option("--action", action_name, "Catalog action name (default: standard)");
  fundamental_cmd->add_option("--X", tangent_path, "Tangent vector JSON {X_mat, X_vec}")->required();
  fundamental_cmd->add_option("--params", params_path, "Action parameters JSON");
  fundamental_cmd->add_option("--point", point,
                              "Evaluate at this point (numeric and analytic) instead of printing the field");

  std::string bundle_path;
  std::size_t samples = 100;
  double tol = 1e-9;
  std::uint64_t seed = 42;
  auto* verify_cmd = app.add_subcommand("verify-invariants", "Check X(S) = 1, X(I) = 0 and the Jacobian rank");
  verify_cmd->add_option("--field", field_path, "Field JSON")->required();
  verify_cmd->add_option("--bundle", bundle_path, "Bundle JSON")->required();
  verify_cmd->add_option("--samples", samples, "Sample points")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--tol", tol, "Defect tolerance")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", seed, "Random seed");

  Eigen::Index dim = 2;
  auto* check_cmd = app.add_subcommand("check-action", "Randomized check of the action axioms");
  check_cmd->add_option("--action", action_name, "Catalog action name")->required();
  check_cmd->add_option("--params", params_path, "Action parameters JSON (may carry \"group\" and \"n\")");
  check_cmd->add_option("--group", group, "T, GL or GA (needed for --action standard)");
  check_cmd->add_option("--n", dim, "Dimension of R^n (overridden by params \"n\")")->check(CLI::PositiveNumber);
  check_cmd->add_option("--samples", samples, "Random (a, b, x) triples")->check(CLI::PositiveNumber);
  check_cmd->add_option("--seed", seed, "Random seed");

  auto* validate_cmd = app.add_subcommand("validate", "Run the acceptance and property suites");
  validate_cmd->add_option("--seed", seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*flow_cmd) {
      const auto field = io::field_from_json(io::read_json_file(field_path));
      const auto flow = make_flow(field);
      if (show_form) std::cerr << to_string(flow.form()) << '\n';
      print_vector(flow_at(flow, t, point_or_origin(point, field.dim())), format);
      return kOk;
    }
    if (*orbit_cmd) {
      const auto field = io::field_from_json(io::read_json_file(field_path));
      const auto o = orbit(make_flow(field), point_or_origin(point, field.dim()), uniform_grid(t0, t1, steps));
      io::write_orbit_csv(std::cout, o);
      return kOk;
    }
    if (*integrate_cmd) {
      const auto field = io::field_from_json(io::read_json_file(field_path));
      print_vector(integrate(integral_curve_problem(field, point_or_origin(point, field.dim()), t, step)), format);
      return kOk;
    }
    if (*bracket_cmd) {
      const auto x = io::field_from_json(io::read_json_file(x_path));
      const auto y = io::field_from_json(io::read_json_file(y_path));
      if (x.dim() != y.dim()) throw io::InputError("bracket: fields have different dimensions");
      std::cout << io::to_json(bracket(x, y)).dump() << '\n';
      return kOk;
    }
    if (*fundamental_cmd) {
      const GroupKind kind = io::group_kind_from_string(group);
      const auto action = io::action_from_json(action_name, params_or_empty(params_path), kind);
      const auto X = io::tangent_from_json(io::read_json_file(tangent_path), kind);
      if (!point.empty()) {
        const VectorXd x = io::parse_point(point);
        if (x.size() != X.dim()) throw io::InputError("point dimension does not match the tangent vector");
        json out{{"numeric", io::to_json(fundamental_field_numeric(action, X, x))}};
        out["analytic"] = io::to_json(fundamental_field_chart(action, X, x));
        std::cout << out.dump() << '\n';
      } else {
        if (action.is_chart_conjugated())
          throw io::InputError("chart-conjugated fields are not affine; pass --point to evaluate them");
        std::cout << io::to_json(fundamental_field_analytic(action, X)).dump() << '\n';
      }
      return kOk;
    }
    if (*verify_cmd) {
      const auto field = io::field_from_json(io::read_json_file(field_path));
      const auto bundle = io::bundle_from_json(field, io::read_json_file(bundle_path));
      VerifyOptions vo;
      vo.seed = static_cast<unsigned>(seed);
      const auto rep = verify_bundle(bundle, samples, tol, vo);
      std::cout << io::to_json(rep).dump() << '\n';
      return rep.passed() ? kOk : kValidationFailure;
    }
    if (*check_cmd) {
      const json params = params_or_empty(params_path);
      if (params.contains("group") && params["group"].is_string()) group = params["group"].get<std::string>();
      if (params.contains("n") && params["n"].is_number_integer()) dim = params["n"].get<Eigen::Index>();
      std::optional<GroupKind> kind;
      if (!group.empty()) kind = io::group_kind_from_string(group);
      json p = params;
      if (action_name == "chart-conjugated") p["n"] = dim;
      const auto action = io::action_from_json(action_name, p, kind);
      if (const auto* e = std::get_if<ExpTranslation<double>>(&action.variant()); e && e->s.size() != dim)
        throw io::InputError("exp-translation: \"s\" must have n entries");
      AxiomCheckOptions ao;
      ao.n = dim;
      ao.seed = static_cast<unsigned>(seed);
      const auto rep = check_action_axioms(action, samples, ao);
      std::cout << io::to_json(rep).dump() << '\n';
      return rep.passed() ? kOk : kValidationFailure;
    }
    if (*validate_cmd) {
      validation::Options opt;
      opt.seed = seed;
      bool ok = true;
      for (const auto& suite : {validation::acceptance_suite(opt), validation::property_suite(opt)})
        for (const auto& r : suite) {
          std::cout << validation::format_result(r) << '\n';
          ok = ok && r.passed;
        }
      std::cout << (ok ? "all checks passed" : "some checks FAILED") << '\n';
      return ok ? kOk : kValidationFailure;
    }
  } catch (const io::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::logic_error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidationFailure;
  }
  return kInputError;
}
