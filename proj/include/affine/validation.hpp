#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace affine::validation {

/// Outcome of one randomized check: the worst observed statistic against its bound.
struct CheckResult {
  std::string id;
  std::string name;
  bool passed = false;
  double worst = 0;
  double bound = 0;
  std::string detail;
};

struct Options {
  std::uint64_t seed = 42;
  /// When set, the n = 4 structure-constant table is written here.
  std::string structure_table_path;
};

// Cross-module acceptance checks.
CheckResult closed_form_vs_oracle(const Options& opt);
CheckResult flow_group_law(const Options& opt);
CheckResult structure_constants(const Options& opt);
CheckResult quadratic_shear_end_to_end(const Options& opt);
CheckResult fundamental_field_agreement(const Options& opt);
CheckResult generator_bijections(const Options& opt);
CheckResult chart_conjugation(const Options& opt);
CheckResult invariant_flow_constancy(const Options& opt);
CheckResult rk4_convergence_order(const Options& opt);
CheckResult degenerate_flow_consistency(const Options& opt);

std::vector<CheckResult> acceptance_suite(const Options& opt);

// Further property checks run by `validate` next to the acceptance suite.
CheckResult exponential_inverse_property(const Options& opt);
CheckResult exponential_one_parameter_subgroup(const Options& opt);
CheckResult bracket_jacobi_identity(const Options& opt);
CheckResult linear_change_composition(const Options& opt);
CheckResult flow_derivative(const Options& opt);
CheckResult catalog_action_axioms(const Options& opt);
CheckResult orbit_tangency(const Options& opt);

std::vector<CheckResult> property_suite(const Options& opt);

/// "PASS [id] name: worst=... bound=..."
std::string format_result(const CheckResult& r);

}  // namespace affine::validation
