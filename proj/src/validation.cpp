#include "affine/validation.hpp"

#include "affine/actions.hpp"
#include "affine/fields.hpp"
#include "affine/flows.hpp"
#include "affine/invariants.hpp"
#include "affine/io.hpp"
#include "affine/linalg.hpp"
#include "affine/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace affine::validation {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

VectorXd random_vector(Rng& rng, Eigen::Index n, double bound) {
  VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = uniform(rng, -bound, bound);
  return v;
}

MatrixXd random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double bound) {
  MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = uniform(rng, -bound, bound);
  return m;
}

AffineFieldXd random_field(Rng& rng, Eigen::Index n, double bound) {
  return {random_matrix(rng, n, n, bound), random_vector(rng, n, bound)};
}

/// Tracks the worst ratio statistic / bound so that a single number decides pass/fail.
struct Worst {
  double value = 0;
  double bound = 0;
  double ratio = 0;
  std::string where;
  bool seen = false;

  void update(double v, double b, const std::string& at = {}) {
    const double r = b > 0 ? v / b : (v > 0 ? INFINITY : 0.0);
    if (!seen || !(r <= ratio)) {
      value = v;
      bound = b;
      ratio = r;
      where = at;
      seen = true;
    }
  }
  bool ok() const { return seen && ratio <= 1.0; }
};

CheckResult result(std::string id, std::string name, const Worst& w, std::string detail = {}) {
  CheckResult r{std::move(id), std::move(name), w.ok(), w.value, w.bound, std::move(detail)};
  if (!w.where.empty()) r.detail += (r.detail.empty() ? "" : "; ") + ("worst at " + w.where);
  return r;
}

struct EnsembleMember {
  AffineFieldXd field;
  std::vector<VectorXd> starts;
};

/// 500 random affine fields, n in 1..6, entries of C and B in [-2, 2], three starts in [-2, 2]^n.
std::vector<EnsembleMember> affine_ensemble(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<EnsembleMember> out;
  for (int k = 0; k < 500; ++k) {
    const Eigen::Index n = uniform_int(rng, 1, 6);
    EnsembleMember m{random_field(rng, n, 2.0), {}};
    for (int s = 0; s < 3; ++s) m.starts.push_back(random_vector(rng, n, 2.0));
    out.push_back(std::move(m));
  }
  return out;
}

/// Bracket of two generators from the Kronecker-delta structure constants, as
/// integer coefficients on the generator basis.
std::map<std::pair<int, std::pair<std::size_t, std::size_t>>, int> structure_constant_terms(
    const GeneratorIndex& x, const GeneratorIndex& y) {
  using K = GeneratorIndex::Kind;
  std::map<std::pair<int, std::pair<std::size_t, std::size_t>>, int> terms;
  const auto delta = [](std::size_t a, std::size_t b) { return a == b ? 1 : 0; };
  const auto add = [&](const GeneratorIndex& g, int c) {
    if (c == 0) return;
    const auto key = std::make_pair(g.kind == K::Constant ? 0 : 1, std::make_pair(g.i, g.j));
    terms[key] += c;
    if (terms[key] == 0) terms.erase(key);
  };
  if (x.kind == K::Constant && y.kind == K::Constant) return terms;
  if (x.kind == K::Constant && y.kind == K::Linear) {
    // [E_i, E_k^j] = delta_i^j E_k
    add(GeneratorIndex::constant(y.i), delta(x.i, y.j));
  } else if (x.kind == K::Linear && y.kind == K::Constant) {
    add(GeneratorIndex::constant(x.i), -delta(y.i, x.j));
  } else {
    // [E_a^b, E_c^d] = delta_a^d E_c^b - delta_c^b E_a^d   (E_a^b = u^b d/du^a)
    add(GeneratorIndex::linear(y.i, x.j), delta(x.i, y.j));
    add(GeneratorIndex::linear(x.i, y.j), -delta(y.i, x.j));
  }
  return terms;
}

std::string describe_terms(const std::map<std::pair<int, std::pair<std::size_t, std::size_t>>, int>& terms) {
  if (terms.empty()) return "0";
  std::string out;
  for (const auto& [key, c] : terms) {
    const GeneratorIndex g = key.first == 0 ? GeneratorIndex::constant(key.second.first)
                                            : GeneratorIndex::linear(key.second.first, key.second.second);
    out += (c > 0 ? (out.empty() ? "" : " + ") : (out.empty() ? "-" : " - "));
    if (std::abs(c) != 1) out += std::to_string(std::abs(c)) + " ";
    out += to_string(g);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

CheckResult closed_form_vs_oracle(const Options& opt) {
  Worst w;
  int index = 0;
  for (const auto& m : affine_ensemble(opt.seed)) {
    const auto flow = make_flow(m.field);
    for (const auto& x : m.starts) {
      const VectorXd exact = flow_at(flow, 1.0, x);
      const VectorXd rk = integrate(integral_curve_problem(m.field, x, 1.0, 1e-3));
      w.update((exact - rk).norm(), 1e-6 * (1 + x.norm()),
               "field " + std::to_string(index) + " (" + to_string(flow.form()) + ")");
    }
    ++index;
  }
  return result("1", "closed-form flow vs RK4 oracle (500 fields x 3 starts, t = 1)", w);
}

CheckResult flow_group_law(const Options& opt) {
  Worst w;
  Rng rng(opt.seed ^ 0x9e3779b97f4a7c15ULL);
  int index = 0;
  for (const auto& m : affine_ensemble(opt.seed)) {
    const auto flow = make_flow(m.field);
    for (const auto& x : m.starts) {
      const double s = uniform(rng, -1, 1), t = uniform(rng, -1, 1);
      w.update(group_law_defect(flow, s, t, x), 1e-8 * (1 + x.norm()), "field " + std::to_string(index));
    }
    ++index;
  }
  return result("2", "flow group law phi_{s+t} = phi_s o phi_t", w);
}

CheckResult structure_constants(const Options& opt) {
  Worst w;
  std::size_t pairs_checked = 0;
  std::size_t table_pairs = 0, linear_pairs = 0;
  std::ostringstream table;
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto gens = all_generators(n);
    for (std::size_t a = 0; a < gens.size(); ++a)
      for (std::size_t b = 0; b < gens.size(); ++b) {
        const auto lhs = bracket(generator(gens[a], static_cast<Eigen::Index>(n)),
                                 generator(gens[b], static_cast<Eigen::Index>(n)));
        const auto terms = structure_constant_terms(gens[a], gens[b]);
        std::vector<GeneratorTerm<double>> expected_terms;
        for (const auto& [key, c] : terms)
          expected_terms.push_back({key.first == 0 ? GeneratorIndex::constant(key.second.first)
                                                   : GeneratorIndex::linear(key.second.first, key.second.second),
                                    static_cast<double>(c)});
        const auto rhs = compose(expected_terms, static_cast<Eigen::Index>(n));
        const bool entries_unit = (lhs.C().array().abs() <= 1.0).all() && (lhs.B().array().abs() <= 1.0).all() &&
                                  (lhs.C().array() == lhs.C().array().round()).all() &&
                                  (lhs.B().array() == lhs.B().array().round()).all();
        const bool match = lhs == rhs && entries_unit;
        w.update(match ? 0.0 : 1.0, 0.5, "n=" + std::to_string(n) + " [" + to_string(gens[a]) + ", " +
                                             to_string(gens[b]) + "]");
        ++pairs_checked;
        if (n == 4 && b >= a) {
          ++table_pairs;
          if (gens[a].kind == GeneratorIndex::Kind::Linear && gens[b].kind == GeneratorIndex::Kind::Linear)
            ++linear_pairs;
          table << "[" << to_string(gens[a]) << ", " << to_string(gens[b]) << "] = " << describe_terms(terms)
                << (match ? "" : "   MISMATCH") << '\n';
        }
      }
  }
  if (!opt.structure_table_path.empty()) {
    std::ofstream out(opt.structure_table_path);
    out << table.str();
  }
  // 16 linear generators give 136 unordered pairs; with the 4 constant ones there are 210.
  if (table_pairs != 210 || linear_pairs != 136) w.update(1.0, 0.5, "n=4 table size");
  return result("3", "generator brackets match the Kronecker-delta structure constants (n <= 4)", w,
                std::to_string(pairs_checked) + " ordered pairs; n=4 table: " + std::to_string(table_pairs) +
                    " unordered pairs (" + std::to_string(linear_pairs) + " linear-linear)");
}

CheckResult quadratic_shear_end_to_end(const Options& opt) {
  Worst w;
  const auto bundle = quadratic_shear_bundle(1.0, 1.0, 0.0);
  const auto flow = make_flow(bundle.field);
  w.update((flow_at(flow, 2.0, VectorXd::Zero(2)) - VectorXd{{2.0, 4.0}}).norm(), 1e-9, "flow of (0,0) at t=2");

  VerifyOptions vo;
  vo.seed = static_cast<unsigned>(opt.seed);
  const auto rep = verify_bundle(bundle, 100, 1e-9, vo);
  w.update(rep.max_canonical_defect, 1e-9, "X(S) - 1");
  w.update(rep.max_invariant_defect, 1e-9, "X(I)");
  w.update(rep.jacobian_ok ? 0.0 : 1.0, 0.5, "jacobian rank");

  Rng rng(opt.seed);
  for (int k = 0; k < 100; ++k) {
    const VectorXd x = random_vector(rng, 2, 2.0);
    w.update(std::abs(bundle_jacobian(bundle, x).determinant() - 1.0), 1e-9, "jacobian determinant");
    const double t = uniform(rng, -1, 1);
    const VectorXd sc = random_vector(rng, 2, 2.0);
    const VectorXd moved = straightened_frame_flow(bundle, t, sc);
    w.update((moved - VectorXd{{sc(0) + t, sc(1)}}).norm(), 1e-9, "straightened flow");
    const VectorXd via_flow = bundle_coordinates(bundle, flow_at(flow, t, x));
    w.update((via_flow - straightened_frame_flow(bundle, t, bundle_coordinates(bundle, x))).norm(), 1e-9,
             "bundle coordinates of the flow");
  }
  return result("4", "quadratic shear field: flow, canonical parameter, invariant, jacobian, straightening", w);
}

CheckResult fundamental_field_agreement(const Options& opt) {
  Worst w;
  Rng rng(opt.seed);
  const char* names[] = {"standard-linear", "standard-translation", "standard-affine", "exp-translation",
                         "det-weighted"};
  for (int which = 0; which < 5; ++which) {
    for (int k = 0; k < 100; ++k) {
      const Eigen::Index n = uniform_int(rng, 1, 4);
      const MatrixXd xm = random_matrix(rng, n, n, 1.0);
      const VectorXd xv = random_vector(rng, n, 1.0);
      const VectorXd x = random_vector(rng, n, 2.0);
      std::optional<GroupActionXd> action;
      TangentAtIdentityXd X;
      switch (which) {
        case 0: action.emplace(StandardLinear{}); X = TangentAtIdentityXd::general_linear(xm); break;
        case 1: action.emplace(StandardTranslation{}); X = TangentAtIdentityXd::translation(xv); break;
        case 2: action.emplace(StandardAffine{}); X = TangentAtIdentityXd::general_affine(xm, xv); break;
        case 3:
          action.emplace(ExpTranslation<double>{random_vector(rng, n, 1.0)});
          X = TangentAtIdentityXd::translation(xv);
          break;
        default:
          action.emplace(DetWeighted{uniform_int(rng, 0, 3)});
          X = TangentAtIdentityXd::general_linear(xm);
          break;
      }
      const VectorXd numeric = fundamental_field_numeric(*action, X, x);
      const VectorXd analytic = evaluate(fundamental_field_analytic(*action, X), x);
      w.update((numeric - analytic).norm(), 1e-5 * (1 + x.norm()), action->name());
    }
  }
  return result("5", "numeric vs analytic fundamental fields (5 actions x 100 samples)", w,
                std::string("actions: ") + names[0] + ", " + names[1] + ", " + names[2] + ", " + names[3] + ", " +
                    names[4]);
}

CheckResult generator_bijections(const Options& opt) {
  Worst w;
  Rng rng(opt.seed);
  for (int k = 0; k < 100; ++k) {
    const Eigen::Index n = uniform_int(rng, 1, 6);
    const MatrixXd c = random_matrix(rng, n, n, 2.0);
    const VectorXd b = random_vector(rng, n, 2.0);

    const auto lin = AffineFieldXd::linear(c);
    const auto lin_back = fundamental_field_analytic(GroupActionXd(StandardLinear{}),
                                                     tangent_for_field(lin, GroupKind::GeneralLinear));
    w.update(max_abs(lin_back.C() - lin.C()) + max_abs(lin_back.B() - lin.B()), 1e-12, "linear / GL");

    const auto con = AffineFieldXd::constant(b);
    const auto con_back = fundamental_field_analytic(GroupActionXd(StandardTranslation{}),
                                                     tangent_for_field(con, GroupKind::Translation));
    w.update(max_abs(con_back.C() - con.C()) + max_abs(con_back.B() - con.B()), 1e-12, "constant / T");

    const AffineFieldXd aff(c, b);
    const auto aff_back = fundamental_field_analytic(GroupActionXd(StandardAffine{}),
                                                     tangent_for_field(aff, GroupKind::GeneralAffine));
    w.update(max_abs(aff_back.C() - aff.C()) + max_abs(aff_back.B() - aff.B()), 1e-12, "affine / GA");
  }
  for (int q = 0; q <= 3; ++q)
    for (Eigen::Index n = 1; n <= 4; ++n)
      for (int k = 0; k < 25; ++k) {
        const MatrixXd c = random_matrix(rng, n, n, 2.0);
        const auto X = TangentAtIdentityXd::general_linear(det_weighted_tangent(c, q));
        const auto back = fundamental_field_analytic(GroupActionXd(DetWeighted{q}), X);
        w.update(max_abs(back.C() - c), 1e-12, "det-weighted q=" + std::to_string(q) + " n=" + std::to_string(n));
      }
  return result("6", "field -> tangent vector -> fundamental field round trips", w);
}

CheckResult chart_conjugation(const Options& opt) {
  (void)opt;
  Worst w;
  const GroupActionXd action(ChartConjugated<double>{StandardLinear{}, product_exp_chart<double>(1)});
  const auto X = TangentAtIdentityXd::general_linear(MatrixXd::Identity(1, 1));
  for (double u : {-0.5, 0.5, 1.0, 2.0}) {
    const VectorXd x{{u}};
    const double expected = u / (u + 1);
    const std::string at = "u=" + io::format_double(u);
    w.update(std::abs(fundamental_field_chart(action, X, x)(0) - expected), 1e-6, at + " (chart formula)");
    w.update(std::abs(fundamental_field_numeric(action, X, x)(0) - expected), 1e-6, at + " (numeric)");
    const double t = u * std::exp(u);
    const double back = solve_product_exp(t);
    w.update(std::abs(back * std::exp(back) - t), 1e-12, at + " (Newton residual)");
    w.update(std::abs(back - u), 1e-12, at + " (inverse)");
  }
  return result("7", "chart-conjugated GL(1) field equals u/(u+1) d/du", w);
}

CheckResult invariant_flow_constancy(const Options& opt) {
  Worst w;
  Rng rng(opt.seed);
  for (int k = 0; k < 100; ++k) {
    const Eigen::Index n = uniform_int(rng, 2, 5);
    const Eigen::Index m = n - 1;
    VectorXd b = random_vector(rng, n, 2.0);
    while (std::abs(b(0)) < 0.25) b(0) = uniform(rng, -2, 2);
    const VectorXd fs = random_vector(rng, m, 1.0);
    const VectorXd gw = random_vector(rng, m, 1.0);
    const double fq = uniform(rng, -1, 1);
    // F(xi) = sum_k fs_k sin(xi_k) + fq xi_1^2,  G(xi) = cos(gw . xi) + xi_1^2
    const ScalarFieldXd f(
        m,
        [=](const VectorXd& xi) { return fs.dot(xi.array().sin().matrix()) + fq * xi(0) * xi(0); },
        [=](const VectorXd& xi) {
          VectorXd g = fs.cwiseProduct(xi.array().cos().matrix());
          g(0) += 2 * fq * xi(0);
          return g;
        });
    const ScalarFieldXd g(
        m, [=](const VectorXd& xi) { return std::cos(gw.dot(xi)) + xi(0) * xi(0); },
        [=](const VectorXd& xi) {
          VectorXd gr = -std::sin(gw.dot(xi)) * gw;
          gr(0) += 2 * xi(0);
          return gr;
        });
    const auto bundle = constant_field_bundle(b, f, g);
    const auto flow = make_flow(bundle.field);
    const VectorXd x = random_vector(rng, n, 2.0);
    for (double t : {-1.0, -0.5, 0.5, 1.0}) {
      const VectorXd y = flow_at(flow, t, x);
      w.update(std::abs(bundle.invariants[0](y) - bundle.invariants[0](x)), 1e-7, "invariant, bundle " + std::to_string(k));
      w.update(std::abs(bundle.canonical(y) - bundle.canonical(x) - t), 1e-7, "canonical, bundle " + std::to_string(k));
    }
  }
  return result("8", "invariants constant and canonical parameters shift by t along flows", w);
}

CheckResult rk4_convergence_order(const Options& opt) {
  Rng rng(opt.seed);
  double min_order = INFINITY;
  std::string where;
  for (int k = 0; k < 20; ++k) {
    const Eigen::Index n = uniform_int(rng, 2, 6);
    const auto field = random_field(rng, n, 2.0);
    const VectorXd x = random_vector(rng, n, 2.0);
    const VectorXd exact = flow_at(make_flow(field), 1.0, x);
    const double coarse = (integrate(integral_curve_problem(field, x, 1.0, 0.1)) - exact).norm();
    const double fine = (integrate(integral_curve_problem(field, x, 1.0, 0.05)) - exact).norm();
    const double order = std::log2(coarse / fine);
    if (!(order >= min_order)) {
      min_order = order;
      where = "field " + std::to_string(k) + " (n=" + std::to_string(n) + ")";
    }
  }
  CheckResult r{"9", "RK4 convergence exponent (steps 0.1 and 0.05, 20 fields)", min_order >= 3.7, min_order, 3.7,
                "minimum measured exponent; worst at " + where};
  return r;
}

CheckResult degenerate_flow_consistency(const Options& opt) {
  Worst w;
  Rng rng(opt.seed);
  int shifted = 0;
  for (int k = 0; k < 50; ++k) {
    const Eigen::Index n = uniform_int(rng, 2, 6);
    const Eigen::Index r = uniform_int(rng, 1, static_cast<int>(n) - 1);
    const MatrixXd c = random_matrix(rng, n, r, 1.0) * random_matrix(rng, r, n, 1.0);
    const VectorXd b = -c * random_vector(rng, n, 1.0);
    const AffineFieldXd field(c, b);
    const auto flow = make_flow(field);
    if (flow.form() != FlowForm::ShiftedExponential) {
      w.update(1.0, 0.5, "solvable field " + std::to_string(k) + " classified " + to_string(flow.form()));
      continue;
    }
    ++shifted;
    const MatrixXd kernel = null_space(c);
    const VectorXd other = *flow.fixed_point() + kernel * random_vector(rng, kernel.cols(), 1.0);
    const auto flow2 = make_flow_with_fixed_point(field, other);
    const VectorXd x = random_vector(rng, n, 2.0);
    const double t = uniform(rng, -1, 1);
    w.update((flow_at(flow, t, x) - flow_at(flow2, t, x)).norm(), 1e-10, "solvable field " + std::to_string(k));
  }
  int augmented = 0;
  for (int k = 0; k < 50; ++k) {
    const Eigen::Index n = uniform_int(rng, 2, 6);
    const Eigen::Index r = uniform_int(rng, 1, static_cast<int>(n) - 1);
    const MatrixXd c = random_matrix(rng, n, r, 1.0) * random_matrix(rng, r, n, 1.0);
    // B gets a component of size >= 0.5 along ker(C^T), the orthogonal complement of range(C).
    const MatrixXd left_kernel = null_space(MatrixXd(c.transpose()));
    VectorXd coeffs = random_vector(rng, left_kernel.cols(), 0.5);
    coeffs += 0.5 * coeffs.cwiseSign();
    const VectorXd b = c * random_vector(rng, n, 1.0) + left_kernel * coeffs;
    const AffineFieldXd field(c, b);
    const auto flow = make_flow(field);
    if (flow.form() != FlowForm::AugmentedExponential) {
      w.update(1.0, 0.5, "unsolvable field " + std::to_string(k) + " classified " + to_string(flow.form()));
      continue;
    }
    ++augmented;
    const VectorXd x = random_vector(rng, n, 2.0);
    const VectorXd rk = integrate(integral_curve_problem(field, x, 1.0, 1e-3));
    w.update((flow_at(flow, 1.0, x) - rk).norm(), 1e-6, "unsolvable field " + std::to_string(k));
  }
  return result("10", "degenerate fixed-point systems: choice of fixed point, augmented fallback", w,
                std::to_string(shifted) + " solvable, " + std::to_string(augmented) + " unsolvable fields");
}

std::vector<CheckResult> acceptance_suite(const Options& opt) {
  return {closed_form_vs_oracle(opt),      flow_group_law(opt),         structure_constants(opt),
          quadratic_shear_end_to_end(opt), fundamental_field_agreement(opt), generator_bijections(opt),
          chart_conjugation(opt),          invariant_flow_constancy(opt), rk4_convergence_order(opt),
          degenerate_flow_consistency(opt)};
}

// ---------------------------------------------------------------------------

CheckResult exponential_inverse_property(const Options& opt) {
  Worst w;
  Rng rng(opt.seed);
  for (int k = 0; k < 200; ++k) {
    const Eigen::Index n = uniform_int(rng, 1, 8);
    MatrixXd a = random_matrix(rng, n, n, 1.0);
    a *= uniform(rng, 0, 5) / std::max(a.norm(), 1e-300);
    const MatrixXd e = mat_exp(a), einv = mat_exp(MatrixXd(-a));
    const double scale = e.norm() * einv.norm();
    w.update((e * einv - MatrixXd::Identity(n, n)).norm(), 10 * kDefaultExpTol * scale);
  }
  return result("P1", "exp(A) exp(-A) = I", w, "bound relative to |exp(A)| |exp(-A)|");
}

CheckResult exponential_one_parameter_subgroup(const Options& opt) {
  Worst w;
  Rng rng(opt.seed);
  for (int k = 0; k < 200; ++k) {
    const Eigen::Index n = uniform_int(rng, 1, 8);
    MatrixXd a = random_matrix(rng, n, n, 1.0);
    a *= uniform(rng, 0, 5) / std::max(a.norm(), 1e-300);
    const double s = uniform(rng, -1, 1), t = uniform(rng, -1, 1);
    const MatrixXd es = mat_exp(MatrixXd(s * a)), et = mat_exp(MatrixXd(t * a));
    w.update((mat_exp(MatrixXd((s + t) * a)) - es * et).norm(), 10 * kDefaultExpTol * es.norm() * et.norm());
  }
  return result("P2", "exp((s+t)A) = exp(sA) exp(tA)", w);
}

CheckResult bracket_jacobi_identity(const Options& opt) {
  Worst w;
  Rng rng(opt.seed);
  for (int k = 0; k < 200; ++k) {
    const Eigen::Index n = uniform_int(rng, 1, 6);
    const auto x = random_field(rng, n, 2.0), y = random_field(rng, n, 2.0), z = random_field(rng, n, 2.0);
    const auto jac = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y));
    const double scale = 1 + max_abs(bracket(x, bracket(y, z)).C()) + max_abs(bracket(x, bracket(y, z)).B());
    w.update(max_abs(jac.C()) + max_abs(jac.B()), 1e-12 * scale);
    const auto anti = bracket(x, y) + bracket(y, x);
    w.update(max_abs(anti.C()) + max_abs(anti.B()), 1e-12 * scale);
  }
  return result("P3", "bracket antisymmetry and Jacobi identity", w);
}

CheckResult linear_change_composition(const Options& opt) {
  Worst w;
  Rng rng(opt.seed);
  for (int k = 0; k < 200; ++k) {
    const Eigen::Index n = uniform_int(rng, 1, 6);
    const auto x = random_field(rng, n, 2.0);
    const MatrixXd a = MatrixXd::Identity(n, n) + random_matrix(rng, n, n, 0.3);
    const MatrixXd b = MatrixXd::Identity(n, n) + random_matrix(rng, n, n, 0.3);
    const auto lhs = linear_change(linear_change(x, a), b);
    const auto rhs = linear_change(x, MatrixXd(b * a));
    w.update(max_abs(lhs.C() - rhs.C()) + max_abs(lhs.B() - rhs.B()), 1e-10 * (1 + max_abs(rhs.C()) + max_abs(rhs.B())));
    const VectorXd p = random_vector(rng, n, 2.0);
    w.update((evaluate(linear_change(x, a), VectorXd(a * p)) - a * evaluate(x, p)).norm(), 1e-10 * (1 + p.norm()));
  }
  return result("P4", "coordinate changes compose and push fields forward", w);
}

CheckResult flow_derivative(const Options& opt) {
  Worst w;
  for (const auto& m : affine_ensemble(opt.seed ^ 0x5bd1e995ULL)) {
    const auto flow = make_flow(m.field);
    const auto& x = m.starts[0];
    w.update(max_abs(flow_at(flow, 0.0, x) - x), 0.0);
    const double h = 1e-6;
    const VectorXd d = (flow_at(flow, h, x) - flow_at(flow, -h, x)) / (2 * h);
    const VectorXd v = evaluate(m.field, x);
    w.update((d - v).norm(), 1e-8 * (1 + v.norm()));
  }
  return result("P5", "flow is the identity at t = 0 and has velocity X(x)", w);
}

CheckResult catalog_action_axioms(const Options& opt) {
  Worst w;
  Rng rng(opt.seed);
  for (Eigen::Index n = 1; n <= 4; ++n) {
    std::vector<GroupActionXd> actions{
        GroupActionXd(StandardLinear{}),
        GroupActionXd(StandardTranslation{}),
        GroupActionXd(StandardAffine{}),
        GroupActionXd(ExpTranslation<double>{random_vector(rng, n, 1.0)}),
        GroupActionXd(DetWeighted{static_cast<int>(n % 4)}),
        GroupActionXd(ChartConjugated<double>{StandardAffine{}, exponential_chart<double>(n)}),
        GroupActionXd(ChartConjugated<double>{StandardLinear{}, product_exp_chart<double>(n)}),
        GroupActionXd(ChartConjugated<double>{StandardTranslation{}, diagonal_scaling_chart<double>(
                                                                          VectorXd::Constant(n, 2.0))}),
    };
    AxiomCheckOptions ao;
    ao.n = n;
    ao.seed = static_cast<unsigned>(opt.seed + static_cast<std::uint64_t>(n));
    for (const auto& a : actions) {
      const auto rep = check_action_axioms(a, 200, ao);
      w.update(std::max(rep.max_identity_defect, rep.max_composition_defect), rep.tol,
               rep.action + " n=" + std::to_string(n));
      if (rep.samples < 200) w.update(1.0, 0.5, rep.action + ": too few samples");
    }
  }
  return result("P6", "catalog and chart-conjugated actions satisfy the action axioms", w);
}

CheckResult orbit_tangency(const Options& opt) {
  Worst w;
  Rng rng(opt.seed);
  for (int k = 0; k < 100; ++k) {
    const Eigen::Index n = uniform_int(rng, 1, 5);
    const MatrixXd xm = random_matrix(rng, n, n, 1.0);
    const VectorXd xv = random_vector(rng, n, 1.0);
    const VectorXd x = random_vector(rng, n, 2.0);
    const double t = uniform(rng, -0.1, 0.1);

    const GroupActionXd gl(StandardLinear{});
    const auto field = fundamental_field_analytic(gl, TangentAtIdentityXd::general_linear(xm));
    const auto g = GroupElementXd::general_linear(mat_exp(MatrixXd(t * xm)));
    w.update((flow_at(make_flow(field), t, x) - act(gl, g, x)).norm(), 1e-7, "GL");

    const GroupActionXd ga(StandardAffine{});
    const auto afield = fundamental_field_analytic(ga, TangentAtIdentityXd::general_affine(xm, xv));
    MatrixXd m = MatrixXd::Zero(n + 1, n + 1);
    m.topLeftCorner(n, n) = t * xm;
    m.topRightCorner(n, 1) = t * xv;
    const MatrixXd e = mat_exp(m);
    const auto h = GroupElementXd::general_affine(e.topLeftCorner(n, n), e.topRightCorner(n, 1));
    w.update((flow_at(make_flow(afield), t, x) - act(ga, h, x)).norm(), 1e-7, "GA");

    const GroupActionXd tr(StandardTranslation{});
    const VectorXd left = fundamental_field_numeric(tr, TangentAtIdentityXd::translation(xv), x);
    const VectorXd right = fundamental_field_numeric_right_translation(TangentAtIdentityXd::translation(xv), x);
    w.update((left - right).norm(), 0.0, "T left/right");
  }
  return result("P7", "fundamental-field flows follow one-parameter subgroups", w);
}

std::vector<CheckResult> property_suite(const Options& opt) {
  return {exponential_inverse_property(opt), exponential_one_parameter_subgroup(opt),
          bracket_jacobi_identity(opt),      linear_change_composition(opt),
          flow_derivative(opt),              catalog_action_axioms(opt),
          orbit_tangency(opt)};
}

std::string format_result(const CheckResult& r) {
  std::string out = (r.passed ? "PASS" : "FAIL");
  out += " [" + r.id + "] " + r.name + ": worst=" + io::format_double(r.worst) +
         " bound=" + io::format_double(r.bound);
  if (!r.detail.empty()) out += " (" + r.detail + ")";
  return out;
}

}  // namespace affine::validation
