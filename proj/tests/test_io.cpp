#include "affine/io.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace affine;
using io::json;

TEST_CASE("format_double is shortest round-trip and drops negative zero") {
  CHECK(io::format_double(2.0) == "2");
  CHECK(io::format_double(4.0) == "4");
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(-0.0) == "0");
  CHECK(io::format_double(-1.5) == "-1.5");
  CHECK(io::format_vector(VectorXd{{2, 4}}) == "2 4");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int k = 0; k < 100; ++k) {
    const double v = u(rng);
    CHECK(std::stod(io::format_double(v)) == v);
  }
}

TEST_CASE("parse_point") {
  CHECK(io::parse_point("0,1.5,-2") == VectorXd{{0, 1.5, -2}});
  CHECK(io::parse_point(" 3 , 4") == VectorXd{{3, 4}});
  CHECK_THROWS_AS(io::parse_point(""), io::InputError);
  CHECK_THROWS_AS(io::parse_point("1,,2"), io::InputError);
  CHECK_THROWS_AS(io::parse_point("1,x"), io::InputError);
  CHECK_THROWS_AS(io::parse_point("1,inf"), io::InputError);
}

TEST_CASE("field JSON round trip") {
  const auto j = json::parse(R"({"n": 2, "C": [[0, 0], [2, 0]], "B": [1, 0]})");
  const auto f = io::field_from_json(j);
  CHECK(f.C() == MatrixXd{{0, 0}, {2, 0}});
  CHECK(f.B() == VectorXd{{1, 0}});
  CHECK(io::field_from_json(io::to_json(f)) == f);

  const auto only_b = io::field_from_json(json::parse(R"({"n": 2, "B": [0, 1]})"));
  CHECK(only_b.C() == MatrixXd::Zero(2, 2));

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k < 50; ++k) {
    const Eigen::Index n = 1 + k % 5;
    MatrixXd c(n, n);
    VectorXd b(n);
    for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] = u(rng);
    for (Eigen::Index i = 0; i < n; ++i) b(i) = u(rng);
    const AffineFieldXd g(c, b);
    CHECK(io::field_from_json(json::parse(io::to_json(g).dump())) == g);
  }
}

TEST_CASE("malformed field documents are input errors") {
  for (const char* doc : {R"({"C": [[1]]})", R"({"n": 2, "B": [1]})", R"({"n": 2, "C": [[1, 2], [3]]})",
                          R"({"n": 1, "B": ["a"]})", R"({"n": -1})", R"([1, 2])"}) {
    INFO(doc);
    CHECK_THROWS_AS(io::field_from_json(json::parse(doc)), io::InputError);
  }
  CHECK_THROWS_AS(io::read_json_file("/nonexistent/field.json"), io::InputError);
}

TEST_CASE("group elements and tangents") {
  const auto g = io::element_from_json(json::parse(R"({"kind": "GA", "a": [[2, 0], [0, 1]], "t": [1, 1]})"));
  CHECK(g.kind() == GroupKind::GeneralAffine);
  CHECK(g.t() == VectorXd{{1, 1}});
  const auto back = io::element_from_json(io::to_json(g));
  CHECK(back.a() == g.a());

  const auto x = io::tangent_from_json(json::parse(R"({"X_vec": [1, 2]})"), GroupKind::Translation);
  CHECK(x.X_mat == MatrixXd::Zero(2, 2));
  CHECK(x.X_vec == VectorXd{{1, 2}});
  CHECK(io::group_kind_from_string("GL") == GroupKind::GeneralLinear);
  CHECK_THROWS_AS(io::group_kind_from_string("SO"), io::InputError);
}

TEST_CASE("actions from JSON") {
  CHECK(io::action_from_json("standard", json::object(), GroupKind::GeneralAffine).name() == "standard-affine");
  CHECK(io::action_from_json("det-weighted", json{{"q", 2}}).group_kind() == GroupKind::GeneralLinear);
  const auto chart = io::action_from_json(
      "chart-conjugated", json{{"base", "standard-linear"}, {"chart", "product-exp"}, {"n", 1}});
  CHECK(chart.is_chart_conjugated());
  CHECK(chart.name() == "chart-conjugated(standard-linear, product-exp)");

  CHECK_THROWS_AS(io::action_from_json("standard", json::object()), io::InputError);
  CHECK_THROWS_AS(io::action_from_json("rotation", json::object()), io::InputError);
  CHECK_THROWS_AS(io::action_from_json("det-weighted", json::object()), io::InputError);
  CHECK_THROWS_AS(io::action_from_json("standard-linear", json::object(), GroupKind::Translation), io::InputError);
  CHECK_THROWS_AS(io::action_from_json("chart-conjugated",
                                       json{{"base", "standard-linear"}, {"chart", "polar"}, {"n", 2}}),
                  io::InputError);
}

TEST_CASE("scalar functions and bundles from JSON") {
  const auto poly = io::scalar_field_from_json(
      json::parse(R"({"kind": "polynomial", "terms": [{"coeff": 3, "powers": [2, 1]}, {"coeff": -1, "powers": [0, 0]}]})"),
      2);
  const VectorXd x{{2, 5}};
  CHECK(poly(x) == 3 * 4 * 5 - 1);
  CHECK(poly.gradient(x) == VectorXd{{3 * 2 * 2 * 5, 3 * 4}});
  CHECK_THROWS_AS(io::scalar_field_from_json(json::parse(R"({"kind": "slot", "index": 3})"), 2), io::InputError);

  const auto shear = io::field_from_json(json::parse(R"({"n": 2, "C": [[0, 0], [2, 0]], "B": [1, 0]})"));
  const auto b = io::bundle_from_json(shear, json{{"family", "quadratic-shear"}});
  CHECK(verify_bundle(b, 50, 1e-12).passed());
  // I = v - u^2 written as a polynomial
  const auto p = io::bundle_from_json(shear, json::parse(R"({"family": "polynomial",
      "S": {"terms": [{"coeff": 1, "powers": [1, 0]}]},
      "invariants": [{"terms": [{"coeff": 1, "powers": [0, 1]}, {"coeff": -1, "powers": [2, 0]}]}]})"));
  CHECK(verify_bundle(p, 50, 1e-12).passed());

  const auto constant = io::field_from_json(json::parse(R"({"n": 2, "B": [1, 1]})"));
  const auto c = io::bundle_from_json(constant, json::parse(R"({"family": "constant",
      "F": {"kind": "square", "index": 1}, "G": [{"kind": "sin", "index": 1}]})"));
  CHECK(verify_bundle(c, 50, 1e-10).passed());

  CHECK_THROWS_AS(io::bundle_from_json(shear, json{{"family", "constant"}}), io::InputError);
  // a constant field is the beta = 0 member of the shear family
  CHECK(verify_bundle(io::bundle_from_json(constant, json{{"family", "quadratic-shear"}}), 20, 1e-12).passed());
  const auto rotation = io::field_from_json(json::parse(R"({"n": 2, "C": [[0, -1], [1, 0]], "B": [1, 0]})"));
  CHECK_THROWS_AS(io::bundle_from_json(rotation, json{{"family", "quadratic-shear"}}), io::InputError);
  CHECK_THROWS_AS(io::bundle_from_json(AffineFieldXd::zero(2), json{{"family", "constant"}}), io::InputError);
}

TEST_CASE("orbit CSV") {
  const auto f = AffineFieldXd::constant(VectorXd{{1, 2}});
  std::ostringstream os;
  io::write_orbit_csv(os, orbit(make_flow(f), VectorXd{{0, 0}}, uniform_grid(0.0, 1.0, 2)));
  CHECK(os.str() == "t,u1,u2\n0,0,0\n0.5,0.5,1\n1,1,2\n");
}

TEST_CASE("report JSON") {
  VerificationReport r;
  r.samples = 3;
  r.tol = 1e-9;
  const json j = io::to_json(r);
  CHECK(j["passed"] == true);
  CHECK(j["samples"] == 3);
}
