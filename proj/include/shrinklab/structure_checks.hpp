#pragma once
#include "shrinklab/curvature.hpp"
#include "shrinklab/normal_derivatives.hpp"
#include "shrinklab/point_geometry.hpp"

namespace shrinklab {

// Max-norm residuals of the compatibility identities at one chart point:
//   gauss   - intrinsic curvature (from metric derivatives) against the
//             quadratic expression in the second fundamental form,
//   codazzi - symmetry of h^alpha_{ijk} in its last two indices,
//   scalar_consistency - intrinsic scalar curvature against |H|^2 - |A|^2,
//   hessian_identity   - covariant position Hessian against sum_a h^a_ij e_a.
struct StructureResiduals {
  double gauss = 0.0;
  double codazzi = 0.0;
  double scalar_consistency = 0.0;
  double hessian_identity = 0.0;
  double max() const;
};

StructureResiduals structure_residuals(const Immersion& imm, int chart,
                                       const Vec& u);

// Intrinsic frame-component Riemann tensor computed from metric derivatives
// only (oracle order 3). Exposed for tests.
Tens4 intrinsic_riemann(const Immersion& imm, int chart, const Vec& u,
                        const PointGeometry& pg);

// Height-function probe for a fixed ambient direction. Finite differences of
// f = <x,a> and of the normal projector are compared against the closed
// forms that the frame calculus predicts.
struct HeightProbe {
  Vec direction;
  double f = 0.0;
  Vec g;        // <e_alpha, a>
  Vec f_i;      // frame components, from FD
  Mat f_ij;     // covariant Hessian of f, from FD
  Mat g_i;      // (alpha, i) covariant derivative of g, from FD
  Tens3 g_ij;   // (alpha, i, j), from FD
  double residual_f_grad = 0.0;
  double residual_f_hess = 0.0;
  double residual_g_grad = 0.0;
  double residual_g_hess = 0.0;
  double max_residual = 0.0;
};

HeightProbe height_probe_check(const Immersion& imm, int chart, const Vec& u,
                               const Vec& direction);

}  // namespace shrinklab
