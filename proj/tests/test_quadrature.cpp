#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "shrinklab/catalog.hpp"
#include "shrinklab/errors.hpp"
#include "shrinklab/quadrature.hpp"

using namespace shrinklab;

TEST_CASE("gauss-legendre nodes integrate polynomials exactly") {
  Vec x, w;
  gauss_legendre(6, x, w);
  double s0 = 0.0, s2 = 0.0, s10 = 0.0;
  for (int i = 0; i < 6; ++i) {
    s0 += w[i];
    s2 += w[i] * x[i] * x[i];
    s10 += w[i] * std::pow(x[i], 10);
  }
  CHECK(s0 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(s2 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(s10 == doctest::Approx(2.0 / 11.0).epsilon(1e-13));
}

TEST_CASE("gaussian integral over the plane") {
  for (int n : {1, 2}) {
    Immersion plane = build_by_name("plane:n=" + std::to_string(n));
    QuadratureSpec spec;
    spec.nodes_unbounded = 48;
    spec.truncation_radius = 8.0;
    WeightedIntegralResult r =
        weighted_integral(plane, builtin_integrand("one"), spec);
    CHECK(r.value ==
          doctest::Approx(std::pow(2.0 * M_PI, n / 2.0)).epsilon(1e-12));
    CHECK(r.truncation_error_bound < 1e-8);
    CHECK(r.truncation_error_bound > 0.0);
  }
}

TEST_CASE("weighted volume of the unit circle is 2 pi e^{-1/2}") {
  Immersion circ = build_by_name("sphere:n=1");
  QuadratureSpec spec;
  spec.nodes_per_axis = 48;
  WeightedIntegralResult r =
      weighted_integral(circ, builtin_integrand("one"), spec);
  CHECK(r.value == doctest::Approx(2.0 * M_PI * std::exp(-0.5)).epsilon(1e-12));
}

TEST_CASE("weighted volume of S^2(sqrt 2) is 8 pi e^{-1}") {
  Immersion sph = build_by_name("sphere:n=2");
  QuadratureSpec spec;
  spec.nodes_per_axis = 48;
  WeightedIntegralResult r =
      weighted_integral(sph, builtin_integrand("one"), spec);
  CHECK(r.value == doctest::Approx(8.0 * M_PI * std::exp(-1.0)).epsilon(1e-10));
}

TEST_CASE("unweighted area of S^2(sqrt 2) is 8 pi (gnomonic partition)") {
  Immersion sph = build_by_name("sphere:n=2");
  QuadratureSpec spec;
  spec.nodes_per_axis = 48;
  WeightedIntegralResult r =
      weighted_integral(sph, builtin_integrand("one"), spec, false);
  CHECK(r.value == doctest::Approx(8.0 * M_PI).epsilon(1e-10));
}

TEST_CASE("node doubling changes compact results by < 1e-8 beyond 32") {
  Immersion sph = build_by_name("sphere:n=2");
  QuadratureSpec a, b;
  a.nodes_per_axis = 32;
  b.nodes_per_axis = 64;
  const double va =
      weighted_integral(sph, builtin_integrand("x2"), a).value;
  const double vb =
      weighted_integral(sph, builtin_integrand("x2"), b).value;
  CHECK(std::fabs(va - vb) < 1e-8);
}

TEST_CASE("raising the truncation radius moves less than the tail bound") {
  Immersion cyl = build_by_name("cylinder:1x1");
  QuadratureSpec r6, r8;
  r6.nodes_per_axis = 48;
  r8.nodes_per_axis = 48;
  r6.nodes_unbounded = 48;
  r8.nodes_unbounded = 64;
  r6.truncation_radius = 6.0;
  r8.truncation_radius = 8.0;
  WeightedIntegralResult a =
      weighted_integral(cyl, builtin_integrand("x2"), r6);
  WeightedIntegralResult b =
      weighted_integral(cyl, builtin_integrand("x2"), r8);
  CHECK(std::fabs(a.value - b.value) <= a.truncation_error_bound);
}

TEST_CASE("unweighted integrals refuse non-compact targets") {
  Immersion cyl = build_by_name("cylinder:1x1");
  QuadratureSpec spec;
  CHECK_THROWS_AS(
      weighted_integral(cyl, builtin_integrand("one"), spec, false),
      NonCompactUnweightedIntegral);
}

TEST_CASE("quadrature spec validation") {
  QuadratureSpec bad;
  bad.nodes_per_axis = 2;
  CHECK_THROWS_AS(bad.validate(), InvalidSpec);
  QuadratureSpec bad2;
  bad2.truncation_radius = 0.5;
  CHECK_THROWS_AS(bad2.validate(), InvalidSpec);
}

TEST_CASE("gradient balance on parallel-H shrinkers: everything vanishes") {
  for (const std::string& name : {"sphere:n=2", "cylinder:1x1"}) {
    Immersion imm = build_by_name(name);
    QuadratureSpec spec;
    spec.nodes_per_axis = 32;
    spec.nodes_unbounded = 48;
    GradHBalance b = gradH_balance(imm, spec);
    CAPTURE(name);
    CHECK(b.warning.empty());
    CHECK(std::fabs(b.lhs.value) < 1e-10);
    CHECK(b.equality_gap < 1e-6);
    CHECK(b.bound_slack > -1e-6);
  }
}

TEST_CASE("gradient balance bound is strictly positive for p >= 2 products") {
  Immersion prod = build_by_name("product:1,2");
  QuadratureSpec spec;
  spec.nodes_per_axis = 16;
  GradHBalance b = gradH_balance(prod, spec);
  // (|A|^2 - 1)|H|^2 = n integrated against the weighted volume
  CHECK(b.rhs_bound.value > 0.1);
  CHECK(std::fabs(b.lhs.value) < 1e-10);
  CHECK(b.bound_slack > 0.0);
}

TEST_CASE("position drift integrals on the shrinker cylinder") {
  // closed form: both sides equal q (2 pi)^{q/2} e^{-m/2} vol(S^m(sqrt m))
  Immersion cyl = build_by_name("cylinder:1x2");  // m=1, q=2
  QuadratureSpec spec;
  spec.nodes_per_axis = 48;
  spec.nodes_unbounded = 48;
  PositionDriftIntegrals pd = position_drift_integrals(cyl, spec, false);
  const double expect = 2.0 * (2.0 * M_PI) * std::exp(-0.5) * (2.0 * M_PI);
  CHECK(pd.grad_energy.value == doctest::Approx(expect).epsilon(1e-6));
  CHECK(pd.weighted_deficit.value == doctest::Approx(expect).epsilon(1e-6));
  CHECK(pd.equality_gap / expect < 1e-8);
}

TEST_CASE("unweighted deficit vanishes on compact entries") {
  for (const std::string& name : {"sphere:n=2", "product:1,2", "veronese"}) {
    Immersion imm = build_by_name(name);
    QuadratureSpec spec;
    spec.nodes_per_axis = 24;
    PositionDriftIntegrals pd = position_drift_integrals(imm, spec, true);
    CAPTURE(name);
    CHECK(std::fabs(pd.unweighted_deficit.value) < 1e-8);
  }
}

TEST_CASE("integrand registry rejects unknown names") {
  CHECK_THROWS_AS(builtin_integrand("nope"), UnknownTarget);
}

TEST_CASE("singular-band nodes are skipped and reported") {
  // colatitude chart of S^2(sqrt 2) with pole-exclusion bands; the nearest
  // Gauss nodes fall inside the band and must be dropped, not evaluated
  Immersion imm;
  imm.dim = 2;
  imm.codim = 1;
  imm.ambient = 3;
  imm.meta.name = "polar";
  imm.meta.compact = true;
  Chart ch;
  ch.name = "polar";
  ch.axes = {ChartAxis{0.0, M_PI, false, 1e-3, 1e-3},
             ChartAxis{0.0, 2.0 * M_PI, false, 0.0, 0.0}};
  const double r = std::sqrt(2.0);
  set_chart_map(ch, [r](const auto* u, auto* x) {
    x[0] = sin(u[0]) * cos(u[1]) * r;
    x[1] = sin(u[0]) * sin(u[1]) * r;
    x[2] = cos(u[0]) * r;
  });
  ch.use_for_integration = true;
  imm.charts.push_back(ch);

  QuadratureSpec spec;
  spec.nodes_per_axis = 96;  // puts the extreme colatitude nodes in the band
  WeightedIntegralResult res =
      weighted_integral(imm, builtin_integrand("one"), spec);
  CHECK(res.skipped_nodes > 0);
  // banded pole caps lose only ~1e-6 relative area
  CHECK(res.value ==
        doctest::Approx(8.0 * M_PI * std::exp(-1.0)).epsilon(1e-5));
}

TEST_CASE("degenerate node outside any band is a hard error") {
  Immersion imm;
  imm.dim = 2;
  imm.codim = 1;
  imm.ambient = 3;
  imm.meta.name = "cone";
  imm.meta.compact = true;
  Chart ch;
  ch.name = "collapsing";
  ch.axes = {ChartAxis{-1.0, 1.0, false, 0.0, 0.0},
             ChartAxis{0.0, 2.0 * M_PI, false, 0.0, 0.0}};
  set_chart_map(ch, [](const auto* u, auto* x) {
    x[0] = u[0] * cos(u[1]);
    x[1] = u[0] * sin(u[1]);
    x[2] = u[0] * 0.0;
  });
  ch.use_for_integration = true;
  imm.charts.push_back(ch);
  QuadratureSpec spec;
  spec.nodes_per_axis = 5;  // odd rule places a node on the singular line
  CHECK_THROWS_AS(weighted_integral(imm, builtin_integrand("one"), spec),
                  DegenerateImmersion);
}
