#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "shrinklab/catalog.hpp"
#include "shrinklab/errors.hpp"
#include "shrinklab/normal_derivatives.hpp"
#include "shrinklab/sampling.hpp"
#include "shrinklab/shrinker_ops.hpp"

using namespace shrinklab;

namespace {

// Graph immersion u -> (u, q1(u), q2(u)) with random cubic polynomials;
// not a shrinker, used for identities that hold on any immersion.
Immersion random_graph(unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> coef(-0.4, 0.4);
  std::array<double, 10> c1{}, c2{};
  for (auto& c : c1) c = coef(rng);
  for (auto& c : c2) c = coef(rng);

  Immersion imm;
  imm.dim = 2;
  imm.codim = 2;
  imm.ambient = 4;
  imm.meta.name = "graph";
  imm.meta.compact = false;
  Chart ch;
  ch.name = "graph";
  ch.axes = {ChartAxis{-1.0, 1.0, false, 0.0, 0.0},
             ChartAxis{-1.0, 1.0, false, 0.0, 0.0}};
  auto poly = [](const std::array<double, 10>& c, const auto& x, const auto& y) {
    return c[0] + x * c[1] + y * c[2] + x * x * c[3] + x * y * c[4] +
           y * y * c[5] + x * x * x * c[6] + x * x * y * c[7] +
           x * y * y * c[8] + y * y * y * c[9];
  };
  set_chart_map(ch, [c1, c2, poly](const auto* u, auto* x) {
    x[0] = u[0];
    x[1] = u[1];
    x[2] = poly(c1, u[0], u[1]);
    x[3] = poly(c2, u[0], u[1]);
  });
  imm.charts.push_back(ch);
  return imm;
}

PointGeometry at(const Immersion& imm, int chart, const Vec& u) {
  return pointwise_geometry(imm, chart, u);
}

}  // namespace

TEST_CASE("shrinker residual: catalog entries are shrinkers") {
  for (const std::string& name :
       {"sphere:n=3", "product:2,2", "cylinder:1,2x1", "veronese", "plane:n=2"}) {
    Immersion imm = build_by_name(name);
    auto pts = sample_points(imm, 25, 3);
    for (const auto& ref : pts) {
      ShrinkerResidual r = shrinker_residual(at(imm, ref.chart, ref.u));
      CAPTURE(name);
      CHECK(r.norm < 1e-10);
    }
  }
}

TEST_CASE("shrinker residual: unit 2-sphere misses by exactly one") {
  // |H| = 2 inward, x_perp has length 1: |H + x_perp| = 1.
  Immersion imm;
  imm.dim = 2;
  imm.codim = 1;
  imm.ambient = 3;
  Chart ch;
  ch.name = "unit-sphere";
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
  ShrinkerResidual r = shrinker_residual(at(imm, 0, Vec{0.2, -0.5}));
  CHECK(r.norm == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("expander residual") {
  Immersion plane = build_by_name("plane:n=2");
  PointGeometry pg = at(plane, 0, Vec{0.7, -0.1});
  CHECK(expander_residual(pg, 1.0).norm == doctest::Approx(0.0));
  CHECK(expander_residual(pg, 3.5).norm == doctest::Approx(0.0));
  CHECK_THROWS_AS(expander_residual(pg, 0.0), InvalidParameter);
  CHECK_THROWS_AS(expander_residual(pg, -1.0), InvalidParameter);

  for (int n : {2, 3}) {
    Immersion sph = build_by_name("sphere:n=" + std::to_string(n));
    PointGeometry spg = at(sph, 0, Vec(n, 0.17));
    // both terms have magnitude sqrt(n) and opposite signs in any gauge
    CHECK(expander_residual(spg, 1.0).norm ==
          doctest::Approx(2.0 * std::sqrt(n)).epsilon(1e-12));
  }

  Immersion prod = build_by_name("product:1,2");
  CHECK(expander_residual(at(prod, 0, Vec{0.1, 0.2, -0.3}), 1.0).norm > 1.0);
}

TEST_CASE("normal derivatives vanish on homogeneous catalog entries") {
  for (const std::string& name : {"sphere:n=2", "product:1,2", "veronese"}) {
    Immersion imm = build_by_name(name);
    auto pts = sample_points(imm, 8, 41);
    for (const auto& ref : pts) {
      PointGeometry pg = at(imm, ref.chart, ref.u);
      NormalDerivatives nd = normal_derivatives(imm, pg, true);
      CAPTURE(name);
      for (double v : nd.h_grad.v) CHECK(std::fabs(v) < 1e-9);
      for (double v : nd.H_grad.a) CHECK(std::fabs(v) < 1e-9);
      for (double v : nd.laplacian_H) CHECK(std::fabs(v) < 1e-8);
      CHECK(nd.grad_H_norm_sq < 1e-18);
    }
  }
}

TEST_CASE("plane: every normal derivative is zero") {
  Immersion plane = build_by_name("plane:n=2");
  PointGeometry pg = at(plane, 0, Vec{0.4, 0.9});
  NormalDerivatives nd = normal_derivatives(plane, pg, true);
  for (double v : nd.h_grad.v) CHECK(v == 0.0);
  for (double v : nd.H_hess.v) CHECK(v == 0.0);
}

TEST_CASE("covariant derivative of h is totally symmetric on any immersion") {
  for (unsigned seed : {5u, 19u}) {
    Immersion g = random_graph(seed);
    auto pts = sample_points(g, 10, seed);
    for (const auto& ref : pts) {
      PointGeometry pg = at(g, ref.chart, ref.u);
      NormalDerivatives nd = normal_derivatives(g, pg, false);
      for (int al = 0; al < pg.p; ++al)
        for (int i = 0; i < pg.n; ++i)
          for (int j = 0; j < pg.n; ++j)
            for (int k = 0; k < pg.n; ++k) {
              const double v = nd.h_grad(al, i, j, k);
              CHECK(std::fabs(v - nd.h_grad(al, i, k, j)) < 1e-8);
              CHECK(std::fabs(v - nd.h_grad(al, j, i, k)) < 1e-8);
            }
    }
  }
}

TEST_CASE("trace compatibility: H^a_{,i} = sum_j h^a_{jji}") {
  Immersion g = random_graph(7);
  PointGeometry pg = at(g, 0, Vec{0.31, -0.44});
  NormalDerivatives nd = normal_derivatives(g, pg, false);
  for (int al = 0; al < pg.p; ++al)
    for (int i = 0; i < pg.n; ++i) {
      double tr = 0.0;
      for (int j = 0; j < pg.n; ++j) tr += nd.h_grad(al, j, j, i);
      CHECK(nd.H_grad(al, i) == doctest::Approx(tr).epsilon(1e-9));
    }
}

TEST_CASE("pointwise shrinker identities hold on catalog entries") {
  for (const std::string& name :
       {"sphere:n=2", "sphere:n=3", "cylinder:1x2", "cylinder:2x1",
        "product:1,2", "product:2,2", "veronese", "plane:n=2"}) {
    Immersion imm = build_by_name(name);
    auto pts = sample_points(imm, 6, 13);
    for (const auto& ref : pts) {
      PointGeometry pg = at(imm, ref.chart, ref.u);
      NormalDerivatives nd = normal_derivatives(imm, pg, true);
      CAPTURE(name);
      CHECK(shrinker_gradient_check(pg, nd).value < 1e-8);
      CHECK(normal_laplacian_check(pg, nd).value < 1e-8);
      CHECK(position_laplacian_check(imm, pg).value < 1e-6);
      CHECK(shrinker_gradient_check(pg, nd).warning.empty());
    }
  }
}

TEST_CASE("simons expansion vanishes on parallel-H catalog shrinkers") {
  for (const std::string& name :
       {"sphere:n=2", "cylinder:1x1", "product:1,2", "product:2,2", "veronese",
        "plane:n=2"}) {
    Immersion imm = build_by_name(name);
    auto pts = sample_points(imm, 4, 53);
    for (const auto& ref : pts) {
      PointGeometry pg = at(imm, ref.chart, ref.u);
      NormalDerivatives nd = normal_derivatives(imm, pg, false);
      CAPTURE(name);
      CHECK(simons_identity_check(imm, pg, nd).value < 1e-6);
    }
  }
}

TEST_CASE("identity checks warn (not fail) off the shrinker gate") {
  Immersion g = random_graph(3);
  PointGeometry pg = at(g, 0, Vec{0.4, 0.2});
  NormalDerivatives nd = normal_derivatives(g, pg, true);
  IdentityResidual r = shrinker_gradient_check(pg, nd);
  CHECK(!r.warning.empty());
  IdentityResidual l = normal_laplacian_check(pg, nd);
  CHECK(!l.warning.empty());
}

TEST_CASE("principal-gauge sigma") {
  // codimension 1: equals |A|^2
  Immersion sph = build_by_name("sphere:n=3");
  PointGeometry pg = at(sph, 0, Vec{0.2, 0.3, -0.1});
  PrincipalSigma ps = principal_frame_sigma(pg);
  CHECK(ps.value == doctest::Approx(pg.norm_A_sq).epsilon(1e-12));

  // products: 1 while |A|^2 = 2
  Immersion prod = build_by_name("product:1,2");
  PointGeometry ppg = at(prod, 0, Vec{0.3, -0.2, 0.4});
  PrincipalSigma pps = principal_frame_sigma(ppg);
  CHECK(pps.value == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(ppg.norm_A_sq == doctest::Approx(2.0).epsilon(1e-11));

  // veronese: bounded by |A|^2 = 5/3
  Immersion ver = build_by_name("veronese");
  PointGeometry vpg = at(ver, 0, Vec{0.4, -0.3});
  PrincipalSigma vps = principal_frame_sigma(vpg);
  CHECK(vps.value <= vpg.norm_A_sq + 1e-10);

  // plane: undefined
  Immersion plane = build_by_name("plane:n=2");
  CHECK_THROWS_AS(principal_frame_sigma(at(plane, 0, Vec{0.5, 0.5})),
                  ZeroMeanCurvature);
}

TEST_CASE("expander drift identity on the plane through the origin") {
  Immersion plane = build_by_name("plane:n=2");
  PointGeometry pg = at(plane, 0, Vec{0.8, -0.6});
  IdentityResidual r =
      position_laplacian_check(plane, pg, DriftMode::expander, 2.0);
  // H = 0 and lap |x|^2 = 2n, so the expander form also closes on the plane
  CHECK(r.value < 1e-9);
}

TEST_CASE("gauge invariance of identity residual values") {
  Immersion prod = build_by_name("product:1,2");
  PointGeometry pg = at(prod, 0, Vec{0.25, -0.15, 0.35});
  NormalDerivatives nd = normal_derivatives(prod, pg, true);
  const double g0 = shrinker_gradient_check(pg, nd).value;
  const double l0 = normal_laplacian_check(pg, nd).value;
  const double s0 = principal_frame_sigma(pg).value;

  // rotate the normal gauge by a fixed orthogonal mix
  Mat Q(pg.p, pg.p);
  const double c = std::cos(0.83), s = std::sin(0.83);
  Q(0, 0) = c; Q(0, 1) = -s; Q(1, 0) = s; Q(1, 1) = c;
  PointGeometry pg2 = pg;
  NormalDerivatives nd2 = nd;
  remix_normal_gauge(pg2, Q);
  remix_normal_gauge(nd2, Q);

  CHECK(std::fabs(shrinker_gradient_check(pg2, nd2).value - g0) < 1e-10);
  CHECK(std::fabs(normal_laplacian_check(pg2, nd2).value - l0) < 1e-10);
  CHECK(std::fabs(principal_frame_sigma(pg2).value - s0) < 1e-10);
}

TEST_CASE("oracle order gating for normal derivatives") {
  Immersion g = random_graph(11);
  g.charts[0].max_order = 3;
  PointGeometry pg = at(g, 0, Vec{0.1, 0.1});
  CHECK_NOTHROW(normal_derivatives(g, pg, false));
  CHECK_THROWS_AS(normal_derivatives(g, pg, true), OracleOrderUnavailable);
}

TEST_CASE("a plane missing the origin is neither shrinker nor expander") {
  Immersion imm;
  imm.dim = 1;
  imm.codim = 1;
  imm.ambient = 2;
  imm.meta.name = "offset-line";
  imm.meta.compact = false;
  Chart ch;
  ch.name = "affine";
  ch.axes = {ChartAxis{}};
  ch.axes[0].unbounded = true;
  set_chart_map(ch, [](const auto* u, auto* x) {
    x[0] = u[0];
    x[1] = u[0] * 0.0 + 1.0;
  });
  imm.charts.push_back(ch);
  PointGeometry pg = pointwise_geometry(imm, 0, Vec{0.37});
  CHECK(shrinker_residual(pg).norm == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(expander_residual(pg, 1.7).norm == doctest::Approx(1.0).epsilon(1e-13));
}
