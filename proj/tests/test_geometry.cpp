#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "shrinklab/catalog.hpp"
#include "shrinklab/curvature.hpp"
#include "shrinklab/errors.hpp"
#include "shrinklab/point_geometry.hpp"
#include "shrinklab/sampling.hpp"

using namespace shrinklab;

namespace {

// Colatitude/longitude chart of S^2(sqrt(2)); poles are excluded by bands.
Immersion polar_sphere() {
  Immersion imm;
  imm.dim = 2;
  imm.codim = 1;
  imm.ambient = 3;
  imm.meta.name = "polar-sphere";
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
  return imm;
}

Mat random_orthogonal(int p, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss;
  Mat Q(p, p);
  for (int i = 0; i < p; ++i) {
    Vec v(p);
    for (int j = 0; j < p; ++j) v[j] = gauss(rng);
    for (int k = 0; k < i; ++k) {
      double mu = 0.0;
      for (int j = 0; j < p; ++j) mu += v[j] * Q(k, j);
      for (int j = 0; j < p; ++j) v[j] -= mu * Q(k, j);
    }
    double nv = norm(v);
    for (int j = 0; j < p; ++j) Q(i, j) = v[j] / nv;
  }
  return Q;
}

}  // namespace

TEST_CASE("induced metric: plane chart is the identity") {
  Immersion plane = build_by_name("plane:n=2");
  Mat g = induced_metric(plane, 0, Vec{0.7, -1.3});
  CHECK(g(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g(1, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::fabs(g(0, 1)) < 1e-15);
}

TEST_CASE("induced metric: colatitude chart of S^2(sqrt 2)") {
  Immersion sph = polar_sphere();
  const double th = 0.9, ph = 2.2;
  Mat g = induced_metric(sph, 0, Vec{th, ph});
  CHECK(g(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(g(1, 1) == doctest::Approx(2.0 * std::sin(th) * std::sin(th)).epsilon(1e-12));
  CHECK(std::fabs(g(0, 1)) < 1e-12);
}

TEST_CASE("induced metric: unit-speed circle chart") {
  Immersion imm;
  imm.dim = 1;
  imm.codim = 1;
  imm.ambient = 2;
  Chart ch;
  ch.name = "angle";
  ch.axes = {ChartAxis{0.0, 2.0 * M_PI, false, 0.0, 0.0}};
  set_chart_map(ch, [](const auto* u, auto* x) {
    x[0] = cos(u[0]);
    x[1] = sin(u[0]);
  });
  imm.charts.push_back(ch);
  Mat g = induced_metric(imm, 0, Vec{1.1});
  CHECK(g(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("degenerate Jacobian is reported") {
  Immersion imm;
  imm.dim = 2;
  imm.codim = 1;
  imm.ambient = 3;
  Chart ch;
  ch.name = "collapsing";
  ch.axes = {ChartAxis{-1.0, 1.0, false, 0.0, 0.0},
             ChartAxis{0.0, 2.0 * M_PI, false, 0.0, 0.0}};
  set_chart_map(ch, [](const auto* u, auto* x) {
    x[0] = u[0] * cos(u[1]);
    x[1] = u[0] * sin(u[1]);
    x[2] = u[0] * 0.0;
  });
  imm.charts.push_back(ch);
  CHECK_THROWS_AS(induced_metric(imm, 0, Vec{0.0, 1.0}), DegenerateImmersion);
  CHECK_THROWS_AS(pointwise_geometry(imm, 0, Vec{1e-9, 1.0}),
                  DegenerateImmersion);
}

TEST_CASE("round shrinker sphere: |A|^2 = 1, |H|^2 = n, H = -x") {
  for (int n : {1, 2, 3}) {
    Immersion sph = build_by_name("sphere:n=" + std::to_string(n));
    auto pts = sample_points(sph, 24, 7);
    for (const auto& ref : pts) {
      PointGeometry pg = pointwise_geometry(sph, ref.chart, ref.u);
      CHECK(pg.norm_A_sq == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(dot(pg.mean_curv_vec, pg.mean_curv_vec) ==
            doctest::Approx(static_cast<double>(n)).epsilon(1e-12));
      Vec diff = vadd(pg.mean_curv_vec, pg.position);
      CHECK(norm(diff) < 1e-16 * 10 + 1e-12);
      // position is purely normal
      CHECK(norm(pg.position_tangential) < 1e-12);
    }
  }
}

TEST_CASE("plane is totally geodesic") {
  Immersion plane = build_by_name("plane:n=3");
  PointGeometry pg = pointwise_geometry(plane, 0, Vec{0.2, -0.9, 2.4});
  CHECK(pg.norm_A_sq == doctest::Approx(0.0));
  CHECK(norm(pg.mean_curv_vec) == doctest::Approx(0.0));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(pg.second_form(0, i, j) == 0.0);
  CHECK(pg.sigma(0, 0) == 0.0);
}

TEST_CASE("cylinder: |A|^2 = 1, |H|^2 = m, x_perp is the sphere factor") {
  Immersion cyl = build_by_name("cylinder:2x1");  // S^2(sqrt 2) x R
  auto pts = sample_points(cyl, 20, 3);
  for (const auto& ref : pts) {
    PointGeometry pg = pointwise_geometry(cyl, ref.chart, ref.u);
    CHECK(pg.norm_A_sq == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(dot(pg.mean_curv_vec, pg.mean_curv_vec) ==
          doctest::Approx(2.0).epsilon(1e-11));
    // normal part of the position = spherical factor, Euclidean slot zero
    CHECK(pg.position_normal[3] == doctest::Approx(0.0).epsilon(1e-12));
    for (int k = 0; k < 3; ++k)
      CHECK(pg.position_normal[k] ==
            doctest::Approx(pg.position[k]).epsilon(1e-11));
  }
}

TEST_CASE("frames are orthonormal to 1e-10 on closed-form charts") {
  for (const std::string& name :
       {"sphere:n=2", "product:1,2", "cylinder:1x2", "veronese"}) {
    Immersion imm = build_by_name(name);
    auto pts = sample_points(imm, 40, 11);
    for (const auto& ref : pts) {
      PointGeometry pg = pointwise_geometry(imm, ref.chart, ref.u);
      std::vector<Vec> basis = pg.tangent_frame;
      for (const Vec& v : pg.normal_frame) basis.push_back(v);
      REQUIRE(static_cast<int>(basis.size()) == imm.ambient);
      for (size_t a = 0; a < basis.size(); ++a)
        for (size_t b = 0; b < basis.size(); ++b) {
          const double expect = a == b ? 1.0 : 0.0;
          CHECK(std::fabs(dot(basis[a], basis[b]) - expect) < 1e-10);
        }
    }
  }
}

TEST_CASE("second fundamental form is symmetric as stored") {
  Immersion imm = build_by_name("product:2,2");
  PointGeometry pg = pointwise_geometry(imm, 0, Vec{0.3, -0.2, 0.5, 0.1});
  for (int al = 0; al < pg.p; ++al)
    for (int i = 0; i < pg.n; ++i)
      for (int j = 0; j < pg.n; ++j)
        CHECK(pg.second_form(al, i, j) == pg.second_form(al, j, i));
}

TEST_CASE("sigma trace, positive semidefiniteness, Cauchy-Schwarz") {
  for (const std::string& name : catalog_names()) {
    Immersion imm = build_by_name(name);
    auto pts = sample_points(imm, 30, 23);
    for (const auto& ref : pts) {
      PointGeometry pg = pointwise_geometry(imm, ref.chart, ref.u);
      double tr = 0.0;
      for (int al = 0; al < pg.p; ++al) tr += pg.sigma(al, al);
      CHECK(tr == doctest::Approx(pg.norm_A_sq).epsilon(1e-12));
      Vec ev;
      sym_eigen(pg.sigma, ev);
      CHECK(ev.front() > -1e-12);
      // sum sigma_ab H^a H^b <= |A|^2 |H|^2
      double shh = 0.0, h2 = 0.0;
      for (int al = 0; al < pg.p; ++al) {
        h2 += pg.mean_curv_comp[al] * pg.mean_curv_comp[al];
        for (int be = 0; be < pg.p; ++be)
          shh += pg.sigma(al, be) * pg.mean_curv_comp[al] * pg.mean_curv_comp[be];
      }
      CHECK(shh <= pg.norm_A_sq * h2 + 1e-10);
    }
  }
}

TEST_CASE("gauge independence under orthogonal normal remixing") {
  Immersion imm = build_by_name("product:1,2");
  PointGeometry pg = pointwise_geometry(imm, 0, Vec{0.4, 0.1, -0.3});
  PointGeometry remixed = pg;
  Mat Q = random_orthogonal(pg.p, 99);
  remix_normal_gauge(remixed, Q);

  CHECK(remixed.norm_A_sq == doctest::Approx(pg.norm_A_sq).epsilon(1e-14));
  double h2a = dot(pg.mean_curv_vec, pg.mean_curv_vec);
  double h2b = 0.0;
  for (int al = 0; al < remixed.p; ++al)
    h2b += remixed.mean_curv_comp[al] * remixed.mean_curv_comp[al];
  CHECK(h2b == doctest::Approx(h2a).epsilon(1e-12));
  Vec eva, evb;
  sym_eigen(pg.sigma, eva);
  sym_eigen(remixed.sigma, evb);
  for (int i = 0; i < pg.p; ++i)
    CHECK(evb[i] == doctest::Approx(eva[i]).epsilon(1e-10));
  CurvatureTensors cta = curvature_tensors(pg);
  CurvatureTensors ctb = curvature_tensors(remixed);
  CHECK(std::fabs(cta.scalar_from_trace - ctb.scalar_from_trace) < 1e-10);
  // frames remain orthonormal
  for (int a = 0; a < remixed.p; ++a)
    for (int b = 0; b < remixed.p; ++b)
      CHECK(std::fabs(dot(remixed.normal_frame[a], remixed.normal_frame[b]) -
                      (a == b ? 1.0 : 0.0)) < 1e-12);
}

TEST_CASE("frames stay orthonormal with the FD oracle (1e-7)") {
  Immersion sph = polar_sphere();
  sph.charts[0].oracle = OracleKind::finite_difference;
  auto pts = sample_points(sph, 15, 5);
  for (const auto& ref : pts) {
    PointGeometry pg = pointwise_geometry(sph, ref.chart, ref.u);
    std::vector<Vec> basis = pg.tangent_frame;
    for (const Vec& v : pg.normal_frame) basis.push_back(v);
    for (size_t a = 0; a < basis.size(); ++a)
      for (size_t b = 0; b < basis.size(); ++b)
        CHECK(std::fabs(dot(basis[a], basis[b]) - (a == b ? 1.0 : 0.0)) < 1e-7);
  }
}
