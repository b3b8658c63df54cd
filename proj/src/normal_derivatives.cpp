#include "shrinklab/normal_derivatives.hpp"

#include "shrinklab/errors.hpp"

namespace shrinklab {

namespace {

// Outer products accumulated into amb x amb matrices.
void add_outer(Mat& M, const Vec& x, const Vec& y, double w) {
  const int N = M.rows;
  for (int i = 0; i < N; ++i) {
    const double wx = w * x[i];
    if (wx == 0.0) continue;
    for (int j = 0; j < N; ++j) M.a[static_cast<size_t>(i) * N + j] += wx * y[j];
  }
}

}  // namespace

NormalDerivatives normal_derivatives(const Immersion& imm,
                                     const PointGeometry& pg,
                                     bool with_hessian) {
  const Chart& chart = imm.charts[pg.chart];
  const int order = with_hessian ? 4 : 3;
  DerivTables t = oracle_tables(chart, pg.amb, pg.u, order);
  return normal_derivatives_from_tables(imm, pg, t, with_hessian);
}

NormalDerivatives normal_derivatives_from_tables(const Immersion&,
                                                 const PointGeometry& pg,
                                                 const DerivTables& t,
                                                 bool with_hessian) {
  const int n = pg.n, p = pg.p, amb = pg.amb;
  if (t.order < (with_hessian ? 4 : 3))
    throw OracleOrderUnavailable(
        "normal derivatives need oracle order " +
        std::to_string(with_hessian ? 4 : 3) + ", tables have order " +
        std::to_string(t.order));

  const Mat& K = pg.metric_inv;
  const Mat& A = pg.frame_coeff;

  // Metric derivatives from the oracle.
  std::vector<Mat> dg(n, Mat(n, n));
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        dg[c](a, b) = dot(t.d2[a][c], t.d1[b]) + dot(t.d1[a], t.d2[b][c]);

  std::vector<Mat> dK(n);
  for (int c = 0; c < n; ++c) dK[c] = mat_scale(mat_mul(mat_mul(K, dg[c]), K), -1.0);

  // Christoffel symbols Gamma^e_{ab}.
  Tens3 Gam(n, n, n);
  for (int e = 0; e < n; ++e)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double s = 0.0;
        for (int f = 0; f < n; ++f)
          s += K(e, f) * (dg[a](f, b) + dg[b](f, a) - dg[f](a, b));
        Gam(e, a, b) = 0.5 * s;
      }

  // Tangent projector P = J K J^T and its coordinate derivatives.
  Mat P(amb, amb);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) add_outer(P, t.d1[a], t.d1[b], K(a, b));

  std::vector<Mat> dP(n, Mat(amb, amb));
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        add_outer(dP[c], t.d2[a][c], t.d1[b], K(a, b));
        add_outer(dP[c], t.d1[a], t.d2[b][c], K(a, b));
        add_outer(dP[c], t.d1[a], t.d1[b], dK[c](a, b));
      }

  auto perp = [&](const Vec& w) {
    Vec r = w;
    Vec Pw = mat_vec(P, w);
    for (int i = 0; i < amb; ++i) r[i] -= Pw[i];
    return r;
  };

  // B_ab = perp(d_ab x) and its coordinate derivative.
  std::vector<std::vector<Vec>> B(n, std::vector<Vec>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) B[a][b] = perp(t.d2[a][b]);

  // dB[c][a][b] = -dP[c] d_ab x + perp-part of d_abc x (projector untouched).
  std::vector<std::vector<std::vector<Vec>>> dB(
      n, std::vector<std::vector<Vec>>(n, std::vector<Vec>(n)));
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const Vec& w = t.d3[a][b][c];
        Vec v1 = mat_vec(dP[c], t.d2[a][b]);
        Vec Pw = mat_vec(P, w);
        Vec v(amb);
        for (int i = 0; i < amb; ++i) v[i] = w[i] - v1[i] - Pw[i];
        dB[c][a][b] = v;
      }

  NormalDerivatives nd;
  nd.h_grad = Tens4(p, n, n, n);

  // Covariant derivative of B: project the ambient derivative and correct
  // the two covariant slots.
  std::vector<std::vector<std::vector<Vec>>> covB(
      n, std::vector<std::vector<Vec>>(n, std::vector<Vec>(n)));
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Vec v = perp(dB[c][a][b]);
        for (int e = 0; e < n; ++e) {
          axpy(-Gam(e, c, a), B[e][b], v);
          axpy(-Gam(e, c, b), B[a][e], v);
        }
        covB[c][a][b] = v;
      }

  for (int al = 0; al < p; ++al) {
    Tens3 hc(n, n, n);  // <e_al, covB[c][a][b]> indexed (a,b,c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          hc(a, b, c) = dot(pg.normal_frame[al], covB[c][a][b]);
    Tens3 t1(n, n, n), t2(n, n, n);
    for (int i = 0; i < n; ++i)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          double s = 0.0;
          for (int a = 0; a < n; ++a) s += A(i, a) * hc(a, b, c);
          t1(i, b, c) = s;
        }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int c = 0; c < n; ++c) {
          double s = 0.0;
          for (int b = 0; b < n; ++b) s += A(j, b) * t1(i, b, c);
          t2(i, j, c) = s;
        }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double s = 0.0;
          for (int c = 0; c < n; ++c) s += A(k, c) * t2(i, j, c);
          nd.h_grad(al, i, j, k) = s;
        }
  }

  // Mean curvature vector in coordinates and its first derivative.
  Vec Hv(amb, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) axpy(K(a, b), B[a][b], Hv);

  std::vector<Vec> dHv(n, Vec(amb, 0.0));
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        axpy(dK[c](a, b), B[a][b], dHv[c]);
        axpy(K(a, b), dB[c][a][b], dHv[c]);
      }

  std::vector<Vec> s_c(n);
  for (int c = 0; c < n; ++c) s_c[c] = perp(dHv[c]);

  nd.H_grad = Mat(p, n);
  for (int al = 0; al < p; ++al)
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int c = 0; c < n; ++c) s += A(i, c) * dot(pg.normal_frame[al], s_c[c]);
      nd.H_grad(al, i) = s;
    }
  nd.grad_H_norm_sq = 0.0;
  for (int c = 0; c < n; ++c)
    for (int d = 0; d < n; ++d) nd.grad_H_norm_sq += K(c, d) * dot(s_c[c], s_c[d]);

  nd.grad_H_ambient.assign(n, Vec(amb, 0.0));
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < n; ++c) axpy(A(i, c), s_c[c], nd.grad_H_ambient[i]);

  if (!with_hessian) return nd;
  nd.has_hessian = true;

  // Second metric derivatives and the second derivative of the projector.
  std::vector<std::vector<Mat>> ddg(n, std::vector<Mat>(n, Mat(n, n)));
  for (int c = 0; c < n; ++c)
    for (int d = 0; d < n; ++d)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          ddg[c][d](a, b) = dot(t.d3[a][c][d], t.d1[b]) +
                            dot(t.d2[a][c], t.d2[b][d]) +
                            dot(t.d2[a][d], t.d2[b][c]) +
                            dot(t.d1[a], t.d3[b][c][d]);

  std::vector<std::vector<Mat>> ddK(n, std::vector<Mat>(n));
  for (int c = 0; c < n; ++c)
    for (int d = 0; d < n; ++d) {
      Mat m = mat_mul(mat_mul(dK[d], dg[c]), K);
      m = mat_add(m, mat_mul(mat_mul(K, ddg[c][d]), K));
      m = mat_add(m, mat_mul(mat_mul(K, dg[c]), dK[d]));
      ddK[c][d] = mat_scale(m, -1.0);
    }

  std::vector<std::vector<Mat>> ddP(n, std::vector<Mat>(n, Mat(amb, amb)));
  for (int c = 0; c < n; ++c)
    for (int d = 0; d < n; ++d) {
      Mat& M = ddP[c][d];
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          add_outer(M, t.d1[a], t.d1[b], ddK[c][d](a, b));
          add_outer(M, t.d2[a][c], t.d1[b], dK[d](a, b));
          add_outer(M, t.d1[a], t.d2[b][c], dK[d](a, b));
          add_outer(M, t.d2[a][d], t.d1[b], dK[c](a, b));
          add_outer(M, t.d1[a], t.d2[b][d], dK[c](a, b));
          add_outer(M, t.d3[a][c][d], t.d1[b], K(a, b));
          add_outer(M, t.d2[a][c], t.d2[b][d], K(a, b));
          add_outer(M, t.d2[a][d], t.d2[b][c], K(a, b));
          add_outer(M, t.d1[a], t.d3[b][c][d], K(a, b));
        }
    }

  // ddB[c][d][a][b] = d_cd (perp(d_ab x)).
  auto ddB = [&](int c, int d, int a, int b) {
    Vec v = t.d4[a][b][c][d];
    Vec r = vsub(v, mat_vec(P, v));
    Vec w = mat_vec(ddP[c][d], t.d2[a][b]);
    for (int i = 0; i < amb; ++i) r[i] -= w[i];
    w = mat_vec(dP[c], t.d3[a][b][d]);
    for (int i = 0; i < amb; ++i) r[i] -= w[i];
    w = mat_vec(dP[d], t.d3[a][b][c]);
    for (int i = 0; i < amb; ++i) r[i] -= w[i];
    return r;
  };

  // ddHv[c][d] = d_d dHv[c].
  std::vector<std::vector<Vec>> ddHv(n, std::vector<Vec>(n, Vec(amb, 0.0)));
  for (int c = 0; c < n; ++c)
    for (int d = 0; d < n; ++d) {
      Vec& v = ddHv[c][d];
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          axpy(ddK[c][d](a, b), B[a][b], v);
          axpy(dK[c](a, b), dB[d][a][b], v);
          axpy(dK[d](a, b), dB[c][a][b], v);
          Vec bb = ddB(c, d, a, b);
          axpy(K(a, b), bb, v);
        }
    }

  // Covariant derivative of s_c in direction d.
  std::vector<std::vector<Vec>> covS(n, std::vector<Vec>(n));
  for (int c = 0; c < n; ++c)
    for (int d = 0; d < n; ++d) {
      Vec ds = mat_vec(dP[d], dHv[c]);
      for (int i = 0; i < amb; ++i) ds[i] = ddHv[c][d][i] - ds[i];
      Vec v = perp(ds);
      for (int e = 0; e < n; ++e) axpy(-Gam(e, d, c), s_c[e], v);
      covS[c][d] = v;
    }

  nd.H_hess = Tens3(p, n, n);
  for (int al = 0; al < p; ++al)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d)
            s += A(i, c) * A(j, d) * dot(pg.normal_frame[al], covS[c][d]);
        nd.H_hess(al, i, j) = s;
      }

  nd.laplacian_H.assign(p, 0.0);
  nd.laplacian_H_ambient.assign(amb, 0.0);
  for (int c = 0; c < n; ++c)
    for (int d = 0; d < n; ++d)
      axpy(K(c, d), covS[c][d], nd.laplacian_H_ambient);
  for (int al = 0; al < p; ++al)
    nd.laplacian_H[al] = dot(pg.normal_frame[al], nd.laplacian_H_ambient);

  return nd;
}

double grad_H_norm_sq_from_tables(const PointGeometry& pg,
                                  const DerivTables& t) {
  const int n = pg.n, amb = pg.amb;
  if (t.order < 3)
    throw OracleOrderUnavailable("grad H needs oracle order 3");
  const Mat& K = pg.metric_inv;

  std::vector<Mat> dg(n, Mat(n, n));
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        dg[c](a, b) = dot(t.d2[a][c], t.d1[b]) + dot(t.d1[a], t.d2[b][c]);
  std::vector<Mat> dK(n);
  for (int c = 0; c < n; ++c)
    dK[c] = mat_scale(mat_mul(mat_mul(K, dg[c]), K), -1.0);

  Mat P(amb, amb);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) add_outer(P, t.d1[a], t.d1[b], K(a, b));
  std::vector<Mat> dP(n, Mat(amb, amb));
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        add_outer(dP[c], t.d2[a][c], t.d1[b], K(a, b));
        add_outer(dP[c], t.d1[a], t.d2[b][c], K(a, b));
        add_outer(dP[c], t.d1[a], t.d1[b], dK[c](a, b));
      }

  auto perp = [&](const Vec& w) {
    Vec Pw = mat_vec(P, w);
    Vec r = w;
    for (int i = 0; i < amb; ++i) r[i] -= Pw[i];
    return r;
  };

  std::vector<std::vector<Vec>> B(n, std::vector<Vec>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) B[a][b] = perp(t.d2[a][b]);

  std::vector<Vec> dHv(n, Vec(amb, 0.0));
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        axpy(dK[c](a, b), B[a][b], dHv[c]);
        // dB = d3 - dP d2 - P d3; accumulate directly
        const Vec& w = t.d3[a][b][c];
        Vec v1 = mat_vec(dP[c], t.d2[a][b]);
        Vec Pw = mat_vec(P, w);
        for (int i = 0; i < amb; ++i)
          dHv[c][i] += K(a, b) * (w[i] - v1[i] - Pw[i]);
      }

  std::vector<Vec> s_c(n);
  for (int c = 0; c < n; ++c) s_c[c] = perp(dHv[c]);
  double out = 0.0;
  for (int c = 0; c < n; ++c)
    for (int d = 0; d < n; ++d) out += K(c, d) * dot(s_c[c], s_c[d]);
  return out;
}

void remix_normal_gauge(NormalDerivatives& nd, const Mat& Q) {
  const int p = Q.rows;
  const int n = nd.H_grad.cols;
  Tens4 hg(p, n, n, n);
  Mat Hg(p, n);
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b) {
      for (int i = 0; i < n; ++i) {
        Hg(a, i) += Q(a, b) * nd.H_grad(b, i);
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            hg(a, i, j, k) += Q(a, b) * nd.h_grad(b, i, j, k);
      }
    }
  nd.h_grad = std::move(hg);
  nd.H_grad = std::move(Hg);
  if (nd.has_hessian) {
    Tens3 Hh(p, n, n);
    Vec lap(p, 0.0);
    for (int a = 0; a < p; ++a)
      for (int b = 0; b < p; ++b) {
        lap[a] += Q(a, b) * nd.laplacian_H[b];
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            Hh(a, i, j) += Q(a, b) * nd.H_hess(b, i, j);
      }
    nd.H_hess = std::move(Hh);
    nd.laplacian_H = std::move(lap);
  }
}

}  // namespace shrinklab
