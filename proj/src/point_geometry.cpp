#include "shrinklab/point_geometry.hpp"

#include <cmath>

#include "shrinklab/errors.hpp"

namespace shrinklab {

namespace {

Mat metric_from_tables(const DerivTables& t) {
  Mat g(t.n, t.n);
  for (int a = 0; a < t.n; ++a)
    for (int b = a; b < t.n; ++b) {
      g(a, b) = dot(t.d1[a], t.d1[b]);
      g(b, a) = g(a, b);
    }
  return g;
}

void check_rank(const Mat& g, double rank_tol, const std::string& chart) {
  Vec ev;
  sym_eigen(g, ev);
  const double lmax = ev.back();
  if (!(ev.front() > rank_tol * std::max(1.0, lmax)))
    throw DegenerateImmersion("rank-deficient Jacobian on chart '" + chart +
                              "' (metric eigenvalue " +
                              std::to_string(ev.front()) + ")");
}

}  // namespace

Mat induced_metric(const Immersion& imm, int chart, const Vec& u) {
  DerivTables t = oracle_tables(imm.charts[chart], imm.ambient, u, 1);
  Mat g = metric_from_tables(t);
  check_rank(g, imm.rank_tol, imm.charts[chart].name);
  return g;
}

PointGeometry pointwise_geometry(const Immersion& imm, int chart, const Vec& u) {
  DerivTables t = oracle_tables(imm.charts[chart], imm.ambient, u, 2);
  return pointwise_geometry_from_tables(imm, chart, u, std::move(t));
}

PointGeometry pointwise_geometry_from_tables(const Immersion& imm, int chart,
                                             const Vec& u, DerivTables t) {
  const int n = imm.dim, p = imm.codim, amb = imm.ambient;
  PointGeometry pg;
  pg.n = n;
  pg.p = p;
  pg.amb = amb;
  pg.chart = chart;
  pg.u = u;

  pg.metric = metric_from_tables(t);
  check_rank(pg.metric, imm.rank_tol, imm.charts[chart].name);
  pg.metric_inv = spd_inverse(pg.metric);
  Mat L;
  cholesky(pg.metric, L);
  pg.sqrt_det_g = std::sqrt(det_from_cholesky(L));

  // Tangent frame: modified Gram-Schmidt on d_1 x, ..., d_n x in index order,
  // with one re-orthogonalization pass, tracking chart-basis coefficients.
  pg.tangent_frame.assign(n, Vec(amb, 0.0));
  pg.frame_coeff = Mat(n, n);
  for (int i = 0; i < n; ++i) {
    Vec v = t.d1[i];
    Vec c(n, 0.0);
    c[i] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < i; ++j) {
        const double mu = dot(v, pg.tangent_frame[j]);
        axpy(-mu, pg.tangent_frame[j], v);
        for (int a = 0; a < n; ++a) c[a] -= mu * pg.frame_coeff(j, a);
      }
    }
    const double nv = norm(v);
    if (!(nv > imm.rank_tol))
      throw DegenerateImmersion("tangent frame collapse on chart '" +
                                imm.charts[chart].name + "'");
    for (int k = 0; k < amb; ++k) pg.tangent_frame[i][k] = v[k] / nv;
    for (int a = 0; a < n; ++a) pg.frame_coeff(i, a) = c[a] / nv;
  }

  // Normal frame: ambient basis vectors projected off the tangent space and
  // the normals found so far, in ambient index order; near-dependent
  // candidates are skipped.
  const double skip_tol = 1e-8;
  pg.normal_frame.clear();
  for (int k = 0; k < amb && static_cast<int>(pg.normal_frame.size()) < p; ++k) {
    Vec w(amb, 0.0);
    w[k] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i < n; ++i)
        axpy(-dot(w, pg.tangent_frame[i]), pg.tangent_frame[i], w);
      for (const Vec& nb : pg.normal_frame) axpy(-dot(w, nb), nb, w);
    }
    const double nw = norm(w);
    if (nw < skip_tol) continue;
    pg.normal_frame.push_back(scaled(w, 1.0 / nw));
  }
  if (static_cast<int>(pg.normal_frame.size()) != p)
    throw DegenerateImmersion("could not complete normal frame on chart '" +
                              imm.charts[chart].name + "'");

  // h^alpha_ij = A_ia A_jb <d_ab x, e_alpha>.
  pg.second_form = Tens3(p, n, n);
  for (int al = 0; al < p; ++al) {
    Mat hc(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        hc(a, b) = dot(t.d2[a][b], pg.normal_frame[al]);
        hc(b, a) = hc(a, b);
      }
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            s += pg.frame_coeff(i, a) * pg.frame_coeff(j, b) * hc(a, b);
        pg.second_form(al, i, j) = s;
        pg.second_form(al, j, i) = s;
      }
  }

  pg.mean_curv_comp.assign(p, 0.0);
  pg.norm_A_sq = 0.0;
  pg.sigma = Mat(p, p);
  for (int al = 0; al < p; ++al) {
    for (int i = 0; i < n; ++i) pg.mean_curv_comp[al] += pg.second_form(al, i, i);
    for (int be = al; be < p; ++be) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          s += pg.second_form(al, i, j) * pg.second_form(be, i, j);
      pg.sigma(al, be) = s;
      pg.sigma(be, al) = s;
    }
    pg.norm_A_sq += pg.sigma(al, al);
  }
  pg.mean_curv_vec.assign(amb, 0.0);
  for (int al = 0; al < p; ++al)
    axpy(pg.mean_curv_comp[al], pg.normal_frame[al], pg.mean_curv_vec);

  pg.position = t.x;
  pg.position_tangential.assign(amb, 0.0);
  for (int i = 0; i < n; ++i)
    axpy(dot(pg.position, pg.tangent_frame[i]), pg.tangent_frame[i],
         pg.position_tangential);
  pg.position_normal = vsub(pg.position, pg.position_tangential);

  pg.tables = std::move(t);
  return pg;
}

void remix_normal_gauge(PointGeometry& pg, const Mat& Q) {
  const int p = pg.p, n = pg.n;
  std::vector<Vec> nf(p, Vec(pg.amb, 0.0));
  Tens3 h(p, n, n);
  Vec H(p, 0.0);
  for (int a = 0; a < p; ++a) {
    for (int b = 0; b < p; ++b) {
      axpy(Q(a, b), pg.normal_frame[b], nf[a]);
      H[a] += Q(a, b) * pg.mean_curv_comp[b];
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          h(a, i, j) += Q(a, b) * pg.second_form(b, i, j);
    }
  }
  pg.normal_frame = std::move(nf);
  pg.second_form = std::move(h);
  pg.mean_curv_comp = std::move(H);
  pg.sigma = mat_mul(mat_mul(Q, pg.sigma), transpose(Q));
}

Vec project_tangent(const PointGeometry& pg, const Vec& w) {
  Vec r(pg.amb, 0.0);
  for (int i = 0; i < pg.n; ++i)
    axpy(dot(w, pg.tangent_frame[i]), pg.tangent_frame[i], r);
  return r;
}

Vec project_normal(const PointGeometry& pg, const Vec& w) {
  return vsub(w, project_tangent(pg, w));
}

}  // namespace shrinklab
