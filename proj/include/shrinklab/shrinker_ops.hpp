#pragma once
#include <optional>
#include <string>

#include "shrinklab/normal_derivatives.hpp"
#include "shrinklab/point_geometry.hpp"

namespace shrinklab {

// A named pointwise residual with the tolerance it is judged against and the
// location it was measured at. Checks that are only claimed on shrinkers set
// `warning` instead of failing hard when the gate is violated.
struct IdentityResidual {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  int chart = 0;
  Vec location;
  std::string warning;
  bool pass() const { return value <= tolerance; }
};

struct ShrinkerResidual {
  Vec vector;       // H + x^perp (ambient)
  double norm = 0.0;
  Vec components;   // H^alpha + <x, e_alpha> per alpha
};

// Zero iff the point satisfies the shrinker equation H = -x^perp.
ShrinkerResidual shrinker_residual(const PointGeometry& pg);

// lambda H^alpha - <x, e_alpha> per alpha; lambda must be positive.
struct ExpanderResidual {
  Vec components;
  double norm = 0.0;
};
ExpanderResidual expander_residual(const PointGeometry& pg, double lambda);

// Points with shrinker residual above this get warning-level gating.
constexpr double kShrinkerGate = 1e-6;

// Gradient consequence of the shrinker equation:
// H^alpha_{,i} = sum_j h^alpha_ij <x, e_j>.
IdentityResidual shrinker_gradient_check(const PointGeometry& pg,
                                         const NormalDerivatives& nd);

// Normal Laplacian consequence:
// Lap^perp H^alpha = sum_j H^alpha_{,j} <x,e_j> + H^alpha - sum_b sigma_ab H^b.
IdentityResidual normal_laplacian_check(const PointGeometry& pg,
                                        const NormalDerivatives& nd);

enum class DriftMode { shrinker, expander };

// (1/2) Lap |x|^2 = n - |H|^2 on shrinkers (n + lambda |H|^2 on expanders),
// with the Laplacian taken independently by intrinsic finite differences.
IdentityResidual position_laplacian_check(const Immersion& imm,
                                          const PointGeometry& pg,
                                          DriftMode mode = DriftMode::shrinker,
                                          double lambda = 1.0);

// Simons-type expansion of (1/2) Lap |A|^2 against its curvature terms;
// asserted on shrinkers with parallel mean curvature.
IdentityResidual simons_identity_check(const Immersion& imm,
                                       const PointGeometry& pg,
                                       const NormalDerivatives& nd);

// sigma in the gauge whose last normal direction is H/|H|:
// returns sum_{ij} <h_ij, H/|H|>^2 and the gauge vector in frame components.
struct PrincipalSigma {
  double value = 0.0;
  Vec gauge;  // components of H/|H| in the normal frame
};
PrincipalSigma principal_frame_sigma(const PointGeometry& pg);

}  // namespace shrinklab
