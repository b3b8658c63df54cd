#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "shrinklab/catalog.hpp"
#include "shrinklab/classify.hpp"
#include "shrinklab/errors.hpp"
#include "shrinklab/suite.hpp"

using namespace shrinklab;

TEST_CASE("classification of the exact catalog") {
  CHECK(classify(build_by_name("sphere:n=2")).case_ == ShrinkerCase::round_sphere);
  CHECK(classify(build_by_name("sphere:n=3")).case_ == ShrinkerCase::round_sphere);
  CHECK(classify(build_by_name("cylinder:1x2")).case_ == ShrinkerCase::cylinder);
  CHECK(classify(build_by_name("cylinder:2x1")).case_ == ShrinkerCase::cylinder);
  CHECK(classify(build_by_name("plane:n=2")).case_ == ShrinkerCase::hyperplane);
  CHECK(classify(build_by_name("product:1,2")).case_ ==
        ShrinkerCase::outside_hypotheses);
  CHECK(classify(build_by_name("product:2,2")).case_ ==
        ShrinkerCase::outside_hypotheses);
}

TEST_CASE("p >= 2 products carry minimal-in-sphere evidence") {
  ClassificationReport rep = classify(build_by_name("product:1,2"));
  CHECK(rep.sphere_minimal_evidence);
  CHECK(rep.flags.norm_H_sq_ge_n);
  CHECK(rep.flags.norm_x_sq_const_n);
  CHECK(rep.flags.sigma_principal_le_1);
  CHECK(!rep.flags.norm_A_sq_le_1);
  CHECK(std::fabs(rep.evidence.sup_norm_H_sq - 3.0) < 1e-8);
  CHECK(std::fabs(rep.evidence.inf_norm_H_sq - 3.0) < 1e-8);
  CHECK(std::fabs(rep.evidence.sup_norm_x_sq - 3.0) < 1e-8);
  CHECK(std::fabs(rep.evidence.inf_norm_x_sq - 3.0) < 1e-8);
}

TEST_CASE("classification is threshold-stable on exact entries") {
  ClassifyTolerances half;
  half.residual = 0.5e-6;
  half.constancy = 0.5e-4;
  for (const std::string& name :
       {"sphere:n=2", "cylinder:1x1", "plane:n=2", "product:1,2"}) {
    ShrinkerCase a = classify(build_by_name(name)).case_;
    ShrinkerCase b = classify(build_by_name(name), 400, 0, half).case_;
    CAPTURE(name);
    CHECK(a == b);
  }
}

TEST_CASE("classification refuses non-shrinkers outright") {
  // round sphere of the wrong radius
  Immersion imm;
  imm.dim = 2;
  imm.codim = 1;
  imm.ambient = 3;
  imm.meta.name = "unit-sphere";
  Chart ch;
  ch.name = "stereo";
  ch.axes = {ChartAxis{-1.2, 1.2, false, 0.0, 0.0},
             ChartAxis{-1.2, 1.2, false, 0.0, 0.0}};
  set_chart_map(ch, [](const auto* u, auto* x) {
    auto t = u[0] * u[0] + u[1] * u[1];
    auto d = 1.0 + t;
    x[0] = u[0] * 2.0 / d;
    x[1] = u[1] * 2.0 / d;
    x[2] = (1.0 - t) / d;
  });
  imm.charts.push_back(ch);
  CHECK_THROWS_AS(classify(imm), NotAShrinker);
}

TEST_CASE("suite runs a small roster and serializes") {
  SuiteConfig cfg;
  cfg.invariant_points = 60;
  cfg.structure_points = 24;
  cfg.identity_points = 8;
  cfg.simons_points = 4;
  SuiteReport rep = run_suite({"sphere:n=1", "plane:n=2"}, cfg);
  CHECK(rep.pass);
  REQUIRE(rep.targets.size() == 2);
  CHECK(rep.targets[0].classification.case_ == ShrinkerCase::round_sphere);
  CHECK(rep.targets[1].classification.case_ == ShrinkerCase::hyperplane);

  nlohmann::ordered_json j = suite_to_json(rep, true);
  CHECK(j["pass"] == true);
  CHECK(j["seed"] == 0);
  CHECK(j["targets"].size() == 2);
  CHECK(j["targets"][0]["target"] == "sphere:n=1");
  CHECK(j["targets"][0]["classification"]["case"] == "round_sphere");
  CHECK(j["targets"][0]["residuals"].is_array());
  CHECK(j["targets"][0]["integrals"].is_array());
  CHECK(j["targets"][0].contains("seconds"));
}

TEST_CASE("reports are byte-stable for a fixed seed (timings off)") {
  SuiteConfig cfg;
  cfg.invariant_points = 40;
  cfg.structure_points = 16;
  cfg.identity_points = 6;
  cfg.simons_points = 3;
  cfg.include_timings = false;
  const std::string a =
      suite_to_json(run_suite({"sphere:n=2"}, cfg), false).dump(2);
  const std::string b =
      suite_to_json(run_suite({"sphere:n=2"}, cfg), false).dump(2);
  CHECK(a == b);
}

TEST_CASE("suite pass flag drops when a target violates a tolerance") {
  // The unit circle of radius 1 is a shrinker; a curve target with an
  // impossible bracket must surface as an error instead.
  SuiteConfig cfg;
  CHECK_THROWS_AS(run_suite({"al:k0-bracket=1.01,1.02"}, cfg), NoClosure);
  CHECK_THROWS_AS(run_suite({"nonsense"}, cfg), UnknownTarget);
}

TEST_CASE("config parsing") {
  nlohmann::json j = nlohmann::json::parse(R"({
    "seed": 7,
    "invariant_points": 50,
    "quadrature": {"nodes_per_axis": 24, "nodes_unbounded": 32, "radius": 6.0},
    "tolerances": {"residual": 1e-5, "constancy": 1e-3},
    "timings": false
  })");
  SuiteConfig cfg = SuiteConfig::from_json(j);
  CHECK(cfg.seed == 7);
  CHECK(cfg.invariant_points == 50);
  CHECK(!cfg.auto_nodes);
  CHECK(cfg.quad.nodes_per_axis == 24);
  CHECK(cfg.quad.truncation_radius == 6.0);
  CHECK(cfg.classify_tol.residual == 1e-5);
  CHECK(!cfg.include_timings);

  nlohmann::json bad = nlohmann::json::parse(R"({"seed": "zero"})");
  CHECK_THROWS_AS(SuiteConfig::from_json(bad), ConfigError);
  nlohmann::json bad2 =
      nlohmann::json::parse(R"({"quadrature": {"nodes_per_axis": 2}})");
  CHECK_THROWS_AS(SuiteConfig::from_json(bad2), InvalidSpec);
}

TEST_CASE("target expansion") {
  auto all = expand_targets({"all"});
  CHECK(all.size() == catalog_names().size() + 1);
  auto two = expand_targets({"sphere:n=2", "veronese"});
  CHECK(two.size() == 2);
}

TEST_CASE("al:circle target builds the unit circle immersion") {
  Immersion imm = build_target("al:circle");
  CHECK(imm.dim == 1);
  CHECK(imm.meta.compact);
  CHECK(imm.charts[0].axes[0].hi == doctest::Approx(2.0 * M_PI).epsilon(1e-9));
  CHECK(classify(imm).case_ == ShrinkerCase::round_sphere);
}

TEST_CASE("a failing residual flips the suite pass flag in the report") {
  SuiteReport rep;
  TargetReport t;
  t.target = "fabricated";
  IdentityResidual bad;
  bad.name = "tight";
  bad.value = 1.0;
  bad.tolerance = 1e-9;
  t.residuals.push_back(bad);
  t.residual_asserted.push_back(true);
  t.pass = bad.pass();
  rep.targets.push_back(t);
  rep.pass = t.pass;
  nlohmann::ordered_json j = suite_to_json(rep, false);
  CHECK(j["pass"] == false);
  CHECK(j["targets"][0]["residuals"][0]["pass"] == false);
}
