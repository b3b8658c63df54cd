#include "shrinklab/shrinker_ops.hpp"

#include <cmath>

#include "shrinklab/curvature.hpp"
#include "shrinklab/errors.hpp"
#include "shrinklab/point_geometry.hpp"
#include "shrinklab/scalar_calculus.hpp"

namespace shrinklab {

namespace {

std::string gate_warning(const PointGeometry& pg) {
  ShrinkerResidual sr = shrinker_residual(pg);
  if (sr.norm > kShrinkerGate)
    return "shrinker gate violated (|H + x_perp| = " + std::to_string(sr.norm) +
           "); identity is only claimed on shrinkers";
  return {};
}

}  // namespace

ShrinkerResidual shrinker_residual(const PointGeometry& pg) {
  ShrinkerResidual r;
  r.vector = vadd(pg.mean_curv_vec, pg.position_normal);
  r.norm = norm(r.vector);
  r.components.resize(pg.p);
  for (int al = 0; al < pg.p; ++al)
    r.components[al] =
        pg.mean_curv_comp[al] + dot(pg.position, pg.normal_frame[al]);
  return r;
}

ExpanderResidual expander_residual(const PointGeometry& pg, double lambda) {
  if (!(lambda > 0.0))
    throw InvalidParameter("expander parameter must be positive");
  ExpanderResidual r;
  r.components.resize(pg.p);
  double s = 0.0;
  for (int al = 0; al < pg.p; ++al) {
    r.components[al] = lambda * pg.mean_curv_comp[al] -
                       dot(pg.position, pg.normal_frame[al]);
    s += r.components[al] * r.components[al];
  }
  r.norm = std::sqrt(s);
  return r;
}

IdentityResidual shrinker_gradient_check(const PointGeometry& pg,
                                         const NormalDerivatives& nd) {
  IdentityResidual res;
  res.name = "shrinker_gradient";
  res.chart = pg.chart;
  res.location = pg.u;
  res.warning = gate_warning(pg);
  for (int i = 0; i < pg.n; ++i) {
    // grad_i H - sum_j <x,e_j> h(e_i,e_j), assembled as an ambient vector
    Vec v = nd.grad_H_ambient[i];
    for (int j = 0; j < pg.n; ++j) {
      const double xej = dot(pg.position, pg.tangent_frame[j]);
      if (xej == 0.0) continue;
      for (int al = 0; al < pg.p; ++al)
        axpy(-xej * pg.second_form(al, i, j), pg.normal_frame[al], v);
    }
    res.value = std::max(res.value, norm(v));
  }
  return res;
}

IdentityResidual normal_laplacian_check(const PointGeometry& pg,
                                        const NormalDerivatives& nd) {
  IdentityResidual res;
  res.name = "normal_laplacian_H";
  res.chart = pg.chart;
  res.location = pg.u;
  res.warning = gate_warning(pg);

  Vec v = nd.laplacian_H_ambient;
  for (int j = 0; j < pg.n; ++j) {
    const double xej = dot(pg.position, pg.tangent_frame[j]);
    axpy(-xej, nd.grad_H_ambient[j], v);
  }
  for (int al = 0; al < pg.p; ++al) {
    double rhs = pg.mean_curv_comp[al];
    for (int be = 0; be < pg.p; ++be)
      rhs -= pg.sigma(al, be) * pg.mean_curv_comp[be];
    axpy(-rhs, pg.normal_frame[al], v);
  }
  res.value = norm(v);
  return res;
}

IdentityResidual position_laplacian_check(const Immersion& imm,
                                          const PointGeometry& pg,
                                          DriftMode mode, double lambda) {
  if (mode == DriftMode::expander && !(lambda > 0.0))
    throw InvalidParameter("expander parameter must be positive");
  IdentityResidual res;
  res.name = mode == DriftMode::shrinker ? "position_laplacian"
                                         : "position_laplacian_expander";
  res.chart = pg.chart;
  res.location = pg.u;
  if (mode == DriftMode::shrinker) res.warning = gate_warning(pg);

  const Chart& ch = imm.charts[pg.chart];
  ScalarField f = [&](const Vec& w) {
    Vec x = chart_point(ch, imm.ambient, w);
    return dot(x, x);
  };
  GradientField grad = [&](const Vec& w) {
    DerivTables t = oracle_tables(ch, imm.ambient, w, 1);
    Vec gr(imm.dim);
    for (int a = 0; a < imm.dim; ++a) gr[a] = 2.0 * dot(t.x, t.d1[a]);
    return gr;
  };
  const double lap = intrinsic_laplacian(imm, pg.chart, pg.u, f, &grad);

  double h2 = 0.0;
  for (int al = 0; al < pg.p; ++al)
    h2 += pg.mean_curv_comp[al] * pg.mean_curv_comp[al];
  const double expected =
      mode == DriftMode::shrinker ? (pg.n - h2) : (pg.n + lambda * h2);
  res.value = std::fabs(0.5 * lap - expected);
  return res;
}

IdentityResidual simons_identity_check(const Immersion& imm,
                                       const PointGeometry& pg,
                                       const NormalDerivatives& nd) {
  IdentityResidual res;
  res.name = "simons";
  res.chart = pg.chart;
  res.location = pg.u;
  res.warning = gate_warning(pg);

  const int n = pg.n, p = pg.p;
  const Tens3& h = pg.second_form;
  CurvatureTensors ct = curvature_tensors(pg);

  double grad_h_sq = 0.0;
  for (int al = 0; al < p; ++al)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          grad_h_sq += nd.h_grad(al, i, j, k) * nd.h_grad(al, i, j, k);

  double cubic = 0.0;  // sum H^b h^b_mj h^a_ij h^a_im
  for (int be = 0; be < p; ++be) {
    if (pg.mean_curv_comp[be] == 0.0) continue;
    for (int m = 0; m < n; ++m)
      for (int j = 0; j < n; ++j) {
        double hh = 0.0;
        for (int al = 0; al < p; ++al)
          for (int i = 0; i < n; ++i) hh += h(al, i, j) * h(al, i, m);
        cubic += pg.mean_curv_comp[be] * h(be, m, j) * hh;
      }
  }

  double sigma_sq = 0.0;
  for (int al = 0; al < p; ++al)
    for (int be = 0; be < p; ++be) sigma_sq += pg.sigma(al, be) * pg.sigma(al, be);

  double normal_term = 0.0;  // 2 sum h^a_ij h^b_ik R_{b a j k}
  for (int al = 0; al < p; ++al)
    for (int be = 0; be < p; ++be)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            normal_term += 2.0 * h(al, i, j) * h(be, i, k) *
                           ct.normal_curvature(be, al, j, k);

  const double rhs = grad_h_sq + cubic - sigma_sq + normal_term;

  ScalarField f = [&](const Vec& w) {
    PointGeometry q = pointwise_geometry(imm, pg.chart, w);
    return q.norm_A_sq;
  };
  const double lap = intrinsic_laplacian(imm, pg.chart, pg.u, f);

  res.value = std::fabs(0.5 * lap - rhs);
  return res;
}

PrincipalSigma principal_frame_sigma(const PointGeometry& pg) {
  double h2 = 0.0;
  for (int al = 0; al < pg.p; ++al)
    h2 += pg.mean_curv_comp[al] * pg.mean_curv_comp[al];
  const double habs = std::sqrt(h2);
  if (habs < 1e-12)
    throw ZeroMeanCurvature("principal sigma undefined where |H| < 1e-12");

  PrincipalSigma ps;
  ps.gauge.resize(pg.p);
  for (int al = 0; al < pg.p; ++al)
    ps.gauge[al] = pg.mean_curv_comp[al] / habs;

  for (int i = 0; i < pg.n; ++i)
    for (int j = 0; j < pg.n; ++j) {
      double hij = 0.0;
      for (int al = 0; al < pg.p; ++al)
        hij += pg.second_form(al, i, j) * ps.gauge[al];
      ps.value += hij * hij;
    }
  return ps;
}

}  // namespace shrinklab
