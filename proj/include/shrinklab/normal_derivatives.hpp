#pragma once
#include "shrinklab/point_geometry.hpp"
#include "shrinklab/tensors.hpp"

namespace shrinklab {

// Covariant derivatives of the second fundamental form and of the mean
// curvature vector in the normal bundle. Everything is computed by
// ambient differentiation followed by projection; no connection forms are
// ever materialized.
struct NormalDerivatives {
  Tens4 h_grad;        // h^alpha_{ijk}, derivative index last
  Mat H_grad;          // H^alpha_{,i}  (p x n)
  Tens3 H_hess;        // H^alpha_{,ij}, second derivative index last
  Vec laplacian_H;     // per alpha
  double grad_H_norm_sq = 0.0;

  // Ambient representations (gauge-free) used by identity checks.
  std::vector<Vec> grad_H_ambient;  // index i -> normal vector (d/de_i) H
  Vec laplacian_H_ambient;
  bool has_hessian = false;
};

// Requires oracle order 3; order 4 when with_hessian (for H_hess and the
// normal Laplacian of H).
NormalDerivatives normal_derivatives(const Immersion& imm,
                                     const PointGeometry& pg,
                                     bool with_hessian = true);

// Same, reusing derivative tables already evaluated at sufficient order.
NormalDerivatives normal_derivatives_from_tables(const Immersion& imm,
                                                 const PointGeometry& pg,
                                                 const DerivTables& tables,
                                                 bool with_hessian = true);

// |grad^perp H|^2 alone (order-3 tables); skips the h-derivative assembly.
double grad_H_norm_sq_from_tables(const PointGeometry& pg,
                                  const DerivTables& tables);

void remix_normal_gauge(NormalDerivatives& nd, const Mat& Q);

}  // namespace shrinklab
