#include "shrinklab/structure_checks.hpp"

#include <cmath>
#include <functional>

#include "shrinklab/errors.hpp"

namespace shrinklab {

namespace {

struct MetricJets {
  Mat g, K;
  std::vector<Mat> dg, dK;
  std::vector<std::vector<Mat>> ddg;
  Tens3 gamma;  // Gamma^e_{ab}
};

MetricJets metric_jets(const DerivTables& t, bool second) {
  const int n = t.n;
  MetricJets m;
  m.g = Mat(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) m.g(a, b) = dot(t.d1[a], t.d1[b]);
  m.K = spd_inverse(m.g);
  m.dg.assign(n, Mat(n, n));
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        m.dg[c](a, b) = dot(t.d2[a][c], t.d1[b]) + dot(t.d1[a], t.d2[b][c]);
  m.dK.resize(n);
  for (int c = 0; c < n; ++c)
    m.dK[c] = mat_scale(mat_mul(mat_mul(m.K, m.dg[c]), m.K), -1.0);
  m.gamma = Tens3(n, n, n);
  for (int e = 0; e < n; ++e)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double s = 0.0;
        for (int f = 0; f < n; ++f)
          s += m.K(e, f) * (m.dg[a](f, b) + m.dg[b](f, a) - m.dg[f](a, b));
        m.gamma(e, a, b) = 0.5 * s;
      }
  if (second) {
    m.ddg.assign(n, std::vector<Mat>(n, Mat(n, n)));
    for (int c = 0; c < n; ++c)
      for (int d = 0; d < n; ++d)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            m.ddg[c][d](a, b) = dot(t.d3[a][c][d], t.d1[b]) +
                                dot(t.d2[a][c], t.d2[b][d]) +
                                dot(t.d2[a][d], t.d2[b][c]) +
                                dot(t.d1[a], t.d3[b][c][d]);
  }
  return m;
}

}  // namespace

Tens4 intrinsic_riemann(const Immersion& imm, int chart, const Vec& u,
                        const PointGeometry& pg) {
  const int n = imm.dim;
  DerivTables t = oracle_tables(imm.charts[chart], imm.ambient, u, 3);
  MetricJets m = metric_jets(t, true);

  // First-kind Christoffel and its coordinate derivative.
  auto gamma1 = [&](int f, int b, int c) {
    return 0.5 * (m.dg[b](f, c) + m.dg[c](f, b) - m.dg[f](b, c));
  };
  auto dgamma1 = [&](int a, int f, int b, int c) {
    return 0.5 * (m.ddg[b][a](f, c) + m.ddg[c][a](f, b) - m.ddg[f][a](b, c));
  };
  // dGam(a; d, b, c) = d_a Gamma^d_{bc}
  Tens4 dGam(n, n, n, n);
  for (int a = 0; a < n; ++a)
    for (int d = 0; d < n; ++d)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          double s = 0.0;
          for (int f = 0; f < n; ++f)
            s += m.dK[a](d, f) * gamma1(f, b, c) + m.K(d, f) * dgamma1(a, f, b, c);
          dGam(a, d, b, c) = s;
        }

  // R^d_{cab} then lowered and converted to frame components.
  Tens4 Rlow(n, n, n, n);
  for (int d = 0; d < n; ++d)
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          double s = dGam(a, d, b, c) - dGam(b, d, a, c);
          for (int e = 0; e < n; ++e)
            s += m.gamma(d, a, e) * m.gamma(e, b, c) -
                 m.gamma(d, b, e) * m.gamma(e, a, c);
          Rlow(d, c, a, b) = s;  // mixed for now
        }
  Tens4 R(n, n, n, n);
  for (int d = 0; d < n; ++d)
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          double s = 0.0;
          for (int e = 0; e < n; ++e) s += m.g(d, e) * Rlow(e, c, a, b);
          R(d, c, a, b) = s;
        }

  const Mat& A = pg.frame_coeff;
  Tens4 Rf(n, n, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int d = 0; d < n; ++d)
            for (int c = 0; c < n; ++c)
              for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                  s += A(i, d) * A(j, c) * A(k, a) * A(l, b) * R(d, c, a, b);
          Rf(i, j, k, l) = s;
        }
  return Rf;
}

double StructureResiduals::max() const {
  double r = gauss;
  if (codazzi > r) r = codazzi;
  if (scalar_consistency > r) r = scalar_consistency;
  if (hessian_identity > r) r = hessian_identity;
  return r;
}

StructureResiduals structure_residuals(const Immersion& imm, int chart,
                                       const Vec& u) {
  const int n = imm.dim, p = imm.codim;
  PointGeometry pg = pointwise_geometry(imm, chart, u);
  StructureResiduals r;

  Tens4 Rf = intrinsic_riemann(imm, chart, u, pg);
  const Tens3& h = pg.second_form;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double rhs = 0.0;
          for (int al = 0; al < p; ++al)
            rhs += h(al, i, k) * h(al, j, l) - h(al, i, l) * h(al, j, k);
          r.gauss = std::max(r.gauss, std::fabs(Rf(i, j, k, l) - rhs));
        }

  double trace = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) trace += Rf(i, j, i, j);
  double h2 = 0.0;
  for (int al = 0; al < p; ++al)
    h2 += pg.mean_curv_comp[al] * pg.mean_curv_comp[al];
  r.scalar_consistency = std::fabs(trace - (h2 - pg.norm_A_sq));

  NormalDerivatives nd = normal_derivatives(imm, pg, /*with_hessian=*/false);
  for (int al = 0; al < p; ++al)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          r.codazzi = std::max(
              r.codazzi, std::fabs(nd.h_grad(al, i, j, k) - nd.h_grad(al, i, k, j)));

  // Covariant position Hessian against its normal-frame expansion.
  const DerivTables& t = pg.tables;
  MetricJets m = metric_jets(t, false);
  const Mat& A = pg.frame_coeff;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vec lhs(pg.amb, 0.0);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          Vec cov = t.d2[a][b];
          for (int c = 0; c < n; ++c) axpy(-m.gamma(c, a, b), t.d1[c], cov);
          axpy(A(i, a) * A(j, b), cov, lhs);
        }
      for (int al = 0; al < p; ++al)
        axpy(-pg.second_form(al, i, j), pg.normal_frame[al], lhs);
      r.hessian_identity = std::max(r.hessian_identity, norm(lhs));
    }

  return r;
}

namespace {

// Scalar and matrix-valued stencils used by the height probe. Step sizes and
// stencil order depend on whether the chart carries oracle noise.
struct ProbeScheme {
  double h1, h2;
};

double sd1(const std::function<double(const Vec&)>& f, const Vec& u, int a,
           double h) {
  Vec u1 = u, u2 = u, u3 = u, u4 = u;
  u1[a] += 2 * h; u2[a] += h; u3[a] -= h; u4[a] -= 2 * h;
  return (-f(u1) + 8 * f(u2) - 8 * f(u3) + f(u4)) / (12 * h);
}

double sd2(const std::function<double(const Vec&)>& f, const Vec& u, int a,
           int b, double h) {
  if (a == b) {
    Vec u1 = u, u2 = u, u3 = u, u4 = u;
    u1[a] += 2 * h; u2[a] += h; u3[a] -= h; u4[a] -= 2 * h;
    return (-f(u1) + 16 * f(u2) - 30 * f(u) + 16 * f(u3) - f(u4)) /
           (12 * h * h);
  }
  auto inner = [&](const Vec& w) { return sd1(f, w, b, h); };
  return sd1(inner, u, a, h);
}

Mat md1(const std::function<Mat(const Vec&)>& F, const Vec& u, int a,
        double h) {
  Vec u1 = u, u2 = u, u3 = u, u4 = u;
  u1[a] += 2 * h; u2[a] += h; u3[a] -= h; u4[a] -= 2 * h;
  Mat r = F(u1);
  Mat f2 = F(u2), f3 = F(u3), f4 = F(u4);
  for (size_t i = 0; i < r.a.size(); ++i)
    r.a[i] = (-r.a[i] + 8 * f2.a[i] - 8 * f3.a[i] + f4.a[i]) / (12 * h);
  return r;
}

Mat md2(const std::function<Mat(const Vec&)>& F, const Vec& u, int a, int b,
        double h) {
  if (a == b) {
    Vec u1 = u, u2 = u, u3 = u, u4 = u;
    u1[a] += 2 * h; u2[a] += h; u3[a] -= h; u4[a] -= 2 * h;
    Mat r = F(u1);
    Mat f0 = F(u), f2 = F(u2), f3 = F(u3), f4 = F(u4);
    for (size_t i = 0; i < r.a.size(); ++i)
      r.a[i] = (-r.a[i] + 16 * f2.a[i] - 30 * f0.a[i] + 16 * f3.a[i] - f4.a[i]) /
               (12 * h * h);
    return r;
  }
  auto inner = [&](const Vec& w) { return md1(F, w, b, h); };
  return md1(inner, u, a, h);
}

}  // namespace

HeightProbe height_probe_check(const Immersion& imm, int chart, const Vec& u,
                               const Vec& direction) {
  const int n = imm.dim, p = imm.codim, amb = imm.ambient;
  const Chart& ch = imm.charts[chart];
  PointGeometry pg = pointwise_geometry(imm, chart, u);
  NormalDerivatives nd = normal_derivatives(imm, pg, /*with_hessian=*/false);
  MetricJets mj = metric_jets(pg.tables, false);
  const Mat& A = pg.frame_coeff;
  const Vec& a = direction;

  const bool noisy = ch.oracle == OracleKind::finite_difference;
  ProbeScheme sch{noisy ? 1.0e-2 : 5.0e-4, noisy ? 2.0e-2 : 2.0e-3};

  HeightProbe hp;
  hp.direction = a;
  hp.f = dot(pg.position, a);
  hp.g.resize(p);
  for (int al = 0; al < p; ++al) hp.g[al] = dot(pg.normal_frame[al], a);

  auto fval = [&](const Vec& w) { return dot(chart_point(ch, amb, w), a); };

  // f_i = <e_i, a>
  Vec df(n);
  for (int c = 0; c < n; ++c) df[c] = sd1(fval, u, c, sch.h1);
  hp.f_i.resize(n);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int c = 0; c < n; ++c) s += A(i, c) * df[c];
    hp.f_i[i] = s;
    hp.residual_f_grad = std::max(
        hp.residual_f_grad, std::fabs(s - dot(pg.tangent_frame[i], a)));
  }

  // f_ij = sum_al h^al_ij g_al
  hp.f_ij = Mat(n, n);
  Mat ddf(n, n);
  for (int c = 0; c < n; ++c)
    for (int d = c; d < n; ++d) {
      ddf(c, d) = sd2(fval, u, c, d, sch.h2);
      ddf(d, c) = ddf(c, d);
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double cov = ddf(c, d);
          for (int e = 0; e < n; ++e) cov -= mj.gamma(e, c, d) * df[e];
          s += A(i, c) * A(j, d) * cov;
        }
      hp.f_ij(i, j) = s;
      double rhs = 0.0;
      for (int al = 0; al < p; ++al) rhs += pg.second_form(al, i, j) * hp.g[al];
      hp.residual_f_hess = std::max(hp.residual_f_hess, std::fabs(s - rhs));
    }

  // Normal projector as a field; its derivatives give the covariant
  // derivatives of g_alpha without differentiating any frame.
  auto perp_proj = [&](const Vec& w) {
    DerivTables t1 = oracle_tables(ch, amb, w, 1);
    Mat g(n, n);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) g(x, y) = dot(t1.d1[x], t1.d1[y]);
    Mat K = spd_inverse(g);
    Mat P(amb, amb);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        double k = K(x, y);
        for (int r = 0; r < amb; ++r)
          for (int s = 0; s < amb; ++s)
            P.a[static_cast<size_t>(r) * amb + s] += k * t1.d1[x][r] * t1.d1[y][s];
      }
    Mat Pp = Mat::identity(amb);
    for (size_t i = 0; i < Pp.a.size(); ++i) Pp.a[i] -= P.a[i];
    return Pp;
  };

  std::vector<Mat> dPp(n);
  for (int c = 0; c < n; ++c) dPp[c] = md1(perp_proj, u, c, sch.h1);

  // s_c = Pp (d_c Pp) a   (ambient representation of the g-derivative)
  Mat Pp0 = perp_proj(u);
  std::vector<Vec> w_c(n), s_c(n);
  for (int c = 0; c < n; ++c) {
    w_c[c] = mat_vec(dPp[c], a);
    s_c[c] = mat_vec(Pp0, w_c[c]);
  }

  hp.g_i = Mat(p, n);
  for (int al = 0; al < p; ++al)
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int c = 0; c < n; ++c)
        s += A(i, c) * dot(pg.normal_frame[al], s_c[c]);
      hp.g_i(al, i) = s;
      double rhs = 0.0;
      for (int k = 0; k < n; ++k)
        rhs -= pg.second_form(al, i, k) * dot(pg.tangent_frame[k], a);
      hp.residual_g_grad = std::max(hp.residual_g_grad, std::fabs(s - rhs));
    }

  // Second covariant derivative of g via second projector derivatives.
  hp.g_ij = Tens3(p, n, n);
  for (int c = 0; c < n; ++c)
    for (int d = 0; d < n; ++d) {
      Mat ddPp = md2(perp_proj, u, d, c, sch.h2);  // d_d d_c Pp
      // d_d s_c = (d_d Pp)(d_c Pp) a + Pp (d_dc Pp) a
      Vec t1v = mat_vec(dPp[d], w_c[c]);
      Vec t2v = mat_vec(Pp0, mat_vec(ddPp, a));
      Vec ds = vadd(t1v, t2v);
      Vec covv = mat_vec(Pp0, ds);
      for (int e = 0; e < n; ++e) axpy(-mj.gamma(e, d, c), s_c[e], covv);
      for (int al = 0; al < p; ++al) {
        double lhs_cd = dot(pg.normal_frame[al], covv);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            hp.g_ij(al, i, j) += A(i, c) * A(j, d) * lhs_cd;
      }
    }
  for (int al = 0; al < p; ++al)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double rhs = 0.0;
        for (int k = 0; k < n; ++k) {
          rhs -= nd.h_grad(al, i, k, j) * dot(pg.tangent_frame[k], a);
          for (int be = 0; be < p; ++be)
            rhs -= pg.second_form(al, i, k) * pg.second_form(be, k, j) *
                   dot(pg.normal_frame[be], a);
        }
        hp.residual_g_hess =
            std::max(hp.residual_g_hess, std::fabs(hp.g_ij(al, i, j) - rhs));
      }

  hp.max_residual = std::max(std::max(hp.residual_f_grad, hp.residual_f_hess),
                             std::max(hp.residual_g_grad, hp.residual_g_hess));
  return hp;
}

}  // namespace shrinklab
