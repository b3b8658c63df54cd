#pragma once
#include <functional>
#include <string>

#include "shrinklab/immersion.hpp"
#include "shrinklab/normal_derivatives.hpp"
#include "shrinklab/point_geometry.hpp"

namespace shrinklab {

// Fixed tensor Gauss-Legendre rule per chart; unbounded axes are truncated
// at [-R, R] and the discarded Gaussian tail is bounded explicitly.
struct QuadratureSpec {
  int nodes_per_axis = 64;
  int nodes_unbounded = 48;
  double truncation_radius = 8.0;
  void validate() const;
};

struct WeightedIntegralResult {
  double value = 0.0;
  double truncation_error_bound = 0.0;
  long node_count = 0;
  long skipped_nodes = 0;  // nodes inside singular-band exclusions
};

// A pointwise integrand with the oracle order it needs. The evaluation
// context provides geometry at that order.
struct IntegrandContext {
  const Immersion* imm = nullptr;
  int chart = 0;
  Vec u;
  const DerivTables* tables = nullptr;        // always present (order >= 1)
  const PointGeometry* pg = nullptr;          // order >= 2
  const NormalDerivatives* nd = nullptr;      // order >= 3 (no Hessian)
};

struct Integrand {
  std::string name;
  int order = 1;
  bool light_order3 = false;  // needs order-3 tables but not h derivatives
  std::function<double(const IntegrandContext&)> eval;
};

// Integral of f * exp(-|x|^2/2) * dv (or plain dv when weighted = false)
// summed over the charts flagged for integration.
WeightedIntegralResult weighted_integral(const Immersion& imm,
                                         const Integrand& f,
                                         const QuadratureSpec& spec,
                                         bool weighted = true);

// Both routes of the weighted balance for the normal gradient of H:
//   lhs          = int |grad^perp H|^2 w dv
//   rhs_equality = int (sum sigma_ab H^a H^b - |H|^2) w dv
//   rhs_bound    = int (|A|^2 - 1) |H|^2 w dv
// with contract lhs == rhs_equality and lhs <= rhs_bound on shrinkers.
struct GradHBalance {
  WeightedIntegralResult lhs, rhs_equality, rhs_bound;
  double equality_gap = 0.0;   // |lhs - rhs_equality|
  double bound_slack = 0.0;    // rhs_bound - lhs (>= 0 expected)
  std::string warning;
};
GradHBalance gradH_balance(const Immersion& imm, const QuadratureSpec& spec);

// Weighted drift identities of the position function:
//   grad_energy      = (1/4) int |grad |x|^2|^2 w dv
//   weighted_deficit = int (n - |H|^2) w dv          (contract: equal)
//   unweighted_deficit = int (n - |H|^2) dv          (compact only; == 0)
struct PositionDriftIntegrals {
  WeightedIntegralResult grad_energy;
  WeightedIntegralResult weighted_deficit;
  WeightedIntegralResult unweighted_deficit;
  bool has_unweighted = false;
  double equality_gap = 0.0;
  std::string warning;
};
PositionDriftIntegrals position_drift_integrals(const Immersion& imm,
                                                const QuadratureSpec& spec,
                                                bool want_unweighted = true);

// Builtin integrands addressable from the CLI.
Integrand builtin_integrand(const std::string& name);

// Gauss-Legendre nodes/weights on [-1, 1] (cached).
void gauss_legendre(int n, Vec& nodes, Vec& weights);

}  // namespace shrinklab
