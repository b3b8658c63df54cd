#pragma once
#include <string>

#include "shrinklab/immersion.hpp"

namespace shrinklab {

enum class ShrinkerCase {
  round_sphere,
  cylinder,
  hyperplane,
  sphere_minimal,
  outside_hypotheses,
};

std::string to_string(ShrinkerCase c);

struct ClassifyTolerances {
  double residual = 1e-6;   // residual-type evidence (|H|, grad H, gates)
  double constancy = 1e-4;  // constancy-type evidence (|A|^2 - 1, |x|^2 spread)
};

struct ClassificationEvidence {
  double sup_norm_A_sq = 0.0;
  double sup_norm_H_sq = 0.0;
  double inf_norm_H_sq = 0.0;
  double sup_shrinker_residual = 0.0;
  double sup_grad_perp_H = 0.0;
  double sup_sigma_principal = 0.0;  // 0 where |H| vanishes everywhere
  double sup_norm_x_sq = 0.0;
  double inf_norm_x_sq = 0.0;
  int points = 0;
};

struct HypothesisFlags {
  bool norm_A_sq_le_1 = false;
  bool norm_H_sq_ge_n = false;       // with |x|^2 == n: minimal in the sphere
  bool norm_x_sq_const_n = false;
  bool compact = false;
  bool sigma_principal_le_1 = false;
  bool polynomial_volume_growth_assumed = true;
};

struct ClassificationReport {
  ShrinkerCase case_ = ShrinkerCase::outside_hypotheses;
  ClassificationEvidence evidence;
  HypothesisFlags flags;
  ClassifyTolerances tolerances;
  bool sphere_minimal_evidence = false;  // both Prop-style flags fired
};

// Decision procedure over measured evidence at low-discrepancy sample points.
// Requires the shrinker equation: throws NotAShrinker when the measured
// residual exceeds the gate.
ClassificationReport classify(const Immersion& imm, int sample_count = 400,
                              std::uint64_t seed = 0,
                              const ClassifyTolerances& tol = {});

}  // namespace shrinklab
