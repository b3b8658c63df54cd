#include "shrinklab/scalar_calculus.hpp"

#include <cmath>

#include "shrinklab/errors.hpp"

namespace shrinklab {

namespace {

// 7-point, 6th-order first derivative.
double inner_d1(const ScalarField& f, const Vec& u, int a, double h) {
  Vec w = u;
  auto at = [&](double s) {
    w[a] = u[a] + s;
    return f(w);
  };
  return (at(3 * h) - 9 * at(2 * h) + 45 * at(h) - 45 * at(-h) + 9 * at(-2 * h) -
          at(-3 * h)) /
         (60 * h);
}

}  // namespace

LaplaceScheme laplace_scheme_for(const Chart& chart) {
  LaplaceScheme s;
  if (chart.oracle == OracleKind::finite_difference) {
    s.outer_h = 2.0e-2;
    s.inner_h = 2.0e-2;
  }
  return s;
}

double intrinsic_laplacian(const Immersion& imm, int chart, const Vec& u,
                           const ScalarField& f,
                           const GradientField* analytic_grad,
                           const LaplaceScheme* scheme) {
  const Chart& ch = imm.charts[chart];
  const int n = imm.dim;
  LaplaceScheme sch = scheme ? *scheme : laplace_scheme_for(ch);

  auto flux = [&](const Vec& w, int a) {
    DerivTables t = oracle_tables(ch, imm.ambient, w, 1);
    Mat g(n, n);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) g(x, y) = dot(t.d1[x], t.d1[y]);
    Mat L;
    if (!cholesky(g, L))
      throw DegenerateImmersion("degenerate metric in Laplacian flux");
    const double sq = std::sqrt(det_from_cholesky(L));
    Mat K = spd_inverse(g);
    Vec grad(n);
    if (analytic_grad) {
      grad = (*analytic_grad)(w);
    } else {
      for (int b = 0; b < n; ++b) grad[b] = inner_d1(f, w, b, sch.inner_h);
    }
    double s = 0.0;
    for (int b = 0; b < n; ++b) s += K(a, b) * grad[b];
    return sq * s;
  };

  DerivTables t0 = oracle_tables(ch, imm.ambient, u, 1);
  Mat g0(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) g0(x, y) = dot(t0.d1[x], t0.d1[y]);
  Mat L0;
  if (!cholesky(g0, L0))
    throw DegenerateImmersion("degenerate metric in Laplacian");
  const double sq0 = std::sqrt(det_from_cholesky(L0));

  double div = 0.0;
  const double h = sch.outer_h;
  for (int a = 0; a < n; ++a) {
    Vec w = u;
    auto at = [&](double s) {
      w[a] = u[a] + s;
      return flux(w, a);
    };
    div += (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
  }
  return div / sq0;
}

double intrinsic_grad_norm_sq(const Immersion& imm, int chart, const Vec& u,
                              const Vec& coordinate_gradient) {
  const Chart& ch = imm.charts[chart];
  const int n = imm.dim;
  DerivTables t = oracle_tables(ch, imm.ambient, u, 1);
  Mat g(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) g(x, y) = dot(t.d1[x], t.d1[y]);
  Mat K = spd_inverse(g);
  double s = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      s += K(a, b) * coordinate_gradient[a] * coordinate_gradient[b];
  return s;
}

}  // namespace shrinklab
