#pragma once
#include <functional>

#include "shrinklab/immersion.hpp"

namespace shrinklab {

using ScalarField = std::function<double(const Vec&)>;       // of chart coords
using GradientField = std::function<Vec(const Vec&)>;        // d_a f, analytic

// Laplace-Beltrami of a scalar chart field in divergence form,
//   (1/sqrt(det g)) d_a ( sqrt(det g) g^{ab} d_b f ),
// with finite differences in chart coordinates. The flux is evaluated with an
// analytic gradient when one is supplied; otherwise the inner derivative uses
// a high-order central stencil.
struct LaplaceScheme {
  double outer_h = 8.0e-3;
  double inner_h = 8.0e-3;
};

LaplaceScheme laplace_scheme_for(const Chart& chart);

double intrinsic_laplacian(const Immersion& imm, int chart, const Vec& u,
                           const ScalarField& f,
                           const GradientField* analytic_grad = nullptr,
                           const LaplaceScheme* scheme = nullptr);

// |grad f|^2 = g^{ab} d_a f d_b f at u, with an analytic coordinate gradient.
double intrinsic_grad_norm_sq(const Immersion& imm, int chart, const Vec& u,
                              const Vec& coordinate_gradient);

}  // namespace shrinklab
