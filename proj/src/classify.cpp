#include "shrinklab/classify.hpp"

#include <cmath>
#include <limits>

#include "shrinklab/errors.hpp"
#include "shrinklab/normal_derivatives.hpp"
#include "shrinklab/point_geometry.hpp"
#include "shrinklab/sampling.hpp"
#include "shrinklab/shrinker_ops.hpp"

namespace shrinklab {

std::string to_string(ShrinkerCase c) {
  switch (c) {
    case ShrinkerCase::round_sphere: return "round_sphere";
    case ShrinkerCase::cylinder: return "cylinder";
    case ShrinkerCase::hyperplane: return "hyperplane";
    case ShrinkerCase::sphere_minimal: return "sphere_minimal";
    case ShrinkerCase::outside_hypotheses: return "outside_hypotheses";
  }
  return "?";
}

ClassificationReport classify(const Immersion& imm, int sample_count,
                              std::uint64_t seed,
                              const ClassifyTolerances& tol) {
  ClassificationReport rep;
  rep.tolerances = tol;
  ClassificationEvidence& ev = rep.evidence;
  ev.inf_norm_H_sq = std::numeric_limits<double>::infinity();
  ev.inf_norm_x_sq = std::numeric_limits<double>::infinity();
  double inf_norm_A_sq = std::numeric_limits<double>::infinity();

  const int n = imm.dim;
  auto pts = sample_points(imm, sample_count, seed);
  for (const SamplePointRef& ref : pts) {
    PointGeometry pg = pointwise_geometry(imm, ref.chart, ref.u);
    NormalDerivatives nd = normal_derivatives(imm, pg, /*with_hessian=*/false);
    const double h2 = dot(pg.mean_curv_vec, pg.mean_curv_vec);
    const double x2 = dot(pg.position, pg.position);
    ev.sup_norm_A_sq = std::max(ev.sup_norm_A_sq, pg.norm_A_sq);
    inf_norm_A_sq = std::min(inf_norm_A_sq, pg.norm_A_sq);
    ev.sup_norm_H_sq = std::max(ev.sup_norm_H_sq, h2);
    ev.inf_norm_H_sq = std::min(ev.inf_norm_H_sq, h2);
    ev.sup_norm_x_sq = std::max(ev.sup_norm_x_sq, x2);
    ev.inf_norm_x_sq = std::min(ev.inf_norm_x_sq, x2);
    ev.sup_shrinker_residual =
        std::max(ev.sup_shrinker_residual, shrinker_residual(pg).norm);
    ev.sup_grad_perp_H =
        std::max(ev.sup_grad_perp_H, std::sqrt(nd.grad_H_norm_sq));
    if (h2 > 1e-12)
      ev.sup_sigma_principal =
          std::max(ev.sup_sigma_principal, principal_frame_sigma(pg).value);
    ++ev.points;
  }

  if (ev.sup_shrinker_residual > tol.residual)
    throw NotAShrinker("classification requires the shrinker equation; "
                       "measured sup |H + x_perp| = " +
                       std::to_string(ev.sup_shrinker_residual));

  HypothesisFlags& fl = rep.flags;
  fl.compact = imm.meta.compact;
  fl.polynomial_volume_growth_assumed = !imm.meta.polynomial_volume_growth;
  fl.norm_A_sq_le_1 = ev.sup_norm_A_sq <= 1.0 + tol.constancy;
  fl.norm_H_sq_ge_n = ev.inf_norm_H_sq >= n - tol.constancy;
  fl.norm_x_sq_const_n = std::fabs(ev.sup_norm_x_sq - n) <= tol.constancy &&
                         std::fabs(ev.inf_norm_x_sq - n) <= tol.constancy;
  fl.sigma_principal_le_1 = ev.sup_sigma_principal <= 1.0 + tol.constancy;
  rep.sphere_minimal_evidence = fl.norm_H_sq_ge_n && fl.norm_x_sq_const_n;

  const double sup_H = std::sqrt(ev.sup_norm_H_sq);
  if (sup_H < tol.residual) {
    rep.case_ = ShrinkerCase::hyperplane;
    return rep;
  }
  const bool a2_pinched = ev.sup_norm_A_sq <= 1.0 + tol.constancy &&
                          std::fabs(ev.sup_norm_A_sq - 1.0) <= tol.constancy &&
                          std::fabs(inf_norm_A_sq - 1.0) <= tol.constancy;
  if (a2_pinched && ev.sup_grad_perp_H < tol.residual) {
    rep.case_ = fl.norm_x_sq_const_n ? ShrinkerCase::round_sphere
                                     : ShrinkerCase::cylinder;
    return rep;
  }
  rep.case_ = ShrinkerCase::outside_hypotheses;
  return rep;
}

}  // namespace shrinklab
