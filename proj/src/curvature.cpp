#include "shrinklab/curvature.hpp"

namespace shrinklab {

CurvatureTensors curvature_tensors(const PointGeometry& pg) {
  const int n = pg.n, p = pg.p;
  const Tens3& h = pg.second_form;
  CurvatureTensors ct;

  ct.riemann = Tens4(n, n, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int al = 0; al < p; ++al)
            s += h(al, i, k) * h(al, j, l) - h(al, i, l) * h(al, j, k);
          ct.riemann(i, j, k, l) = s;
        }

  ct.ricci = Mat(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int al = 0; al < p; ++al) {
        s += pg.mean_curv_comp[al] * h(al, i, k);
        for (int j = 0; j < n; ++j) s -= h(al, i, j) * h(al, j, k);
      }
      ct.ricci(i, k) = s;
    }

  double h2 = 0.0;
  for (int al = 0; al < p; ++al)
    h2 += pg.mean_curv_comp[al] * pg.mean_curv_comp[al];
  ct.scalar = h2 - pg.norm_A_sq;
  ct.scalar_from_trace = 0.0;
  for (int i = 0; i < n; ++i) ct.scalar_from_trace += ct.ricci(i, i);

  ct.normal_curvature = Tens4(p, p, n, n);
  for (int al = 0; al < p; ++al)
    for (int be = 0; be < p; ++be)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int k = 0; k < n; ++k)
            s += h(al, i, k) * h(be, k, j) - h(al, j, k) * h(be, k, i);
          ct.normal_curvature(al, be, i, j) = s;
        }

  return ct;
}

}  // namespace shrinklab
