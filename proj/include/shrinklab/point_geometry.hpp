#pragma once
#include <vector>

#include "shrinklab/immersion.hpp"
#include "shrinklab/linalg.hpp"
#include "shrinklab/tensors.hpp"

namespace shrinklab {

// All first/second-order pointwise quantities at a chart point, expressed
// in deterministic orthonormal frames (Gram-Schmidt in fixed index order).
struct PointGeometry {
  int n = 0, p = 0, amb = 0;
  int chart = 0;
  Vec u;

  Mat metric;      // g_ab in chart coordinates
  Mat metric_inv;  // g^{ab}
  double sqrt_det_g = 0.0;

  std::vector<Vec> tangent_frame;  // e_i, ambient vectors
  std::vector<Vec> normal_frame;   // e_alpha, ambient vectors
  Mat frame_coeff;                 // A: e_i = sum_a A(i,a) d_a x

  Tens3 second_form;  // h[alpha](i,j), orthonormal frame components
  Vec mean_curv_comp; // H^alpha
  Vec mean_curv_vec;  // H = sum H^alpha e_alpha (ambient)
  double norm_A_sq = 0.0;
  Mat sigma;          // sigma_{alpha beta} = sum_{ij} h^a_ij h^b_ij

  Vec position;
  Vec position_tangential;
  Vec position_normal;

  DerivTables tables;  // oracle output used for the assembly (order 2)
};

// g_ab = <d_a x, d_b x>; throws DegenerateImmersion if the Jacobian loses
// rank (smallest metric eigenvalue below rank_tol * largest).
Mat induced_metric(const Immersion& imm, int chart, const Vec& u);

PointGeometry pointwise_geometry(const Immersion& imm, int chart, const Vec& u);

// Same assembly starting from precomputed tables (order >= 2).
PointGeometry pointwise_geometry_from_tables(const Immersion& imm, int chart,
                                             const Vec& u, DerivTables tables);

// Re-express all normal-bundle quantities in the gauge e'_a = sum_b Q(a,b) e_b.
// Q must be orthogonal. Gauge-invariant outputs must not change.
void remix_normal_gauge(PointGeometry& pg, const Mat& Q);

// Projects an ambient vector onto the tangent (or normal) space of pg.
Vec project_tangent(const PointGeometry& pg, const Vec& w);
Vec project_normal(const PointGeometry& pg, const Vec& w);

}  // namespace shrinklab
