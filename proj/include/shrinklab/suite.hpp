#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "shrinklab/classify.hpp"
#include "shrinklab/immersion.hpp"
#include "shrinklab/quadrature.hpp"
#include "shrinklab/shrinker_ops.hpp"

namespace shrinklab {

struct SuiteConfig {
  std::uint64_t seed = 0;
  int invariant_points = 400;   // measured-invariant + classification samples
  int structure_points = 200;   // structure/height residual samples
  int identity_points = 60;     // pointwise identity samples
  int simons_points = 16;       // nested-FD Laplacian samples
  QuadratureSpec quad;          // used when auto_nodes is false
  bool auto_nodes = true;       // pick node counts by chart dimension
  bool include_timings = true;
  ClassifyTolerances classify_tol;

  static SuiteConfig from_json(const nlohmann::json& j);
};

struct IntegralEntry {
  std::string name;
  double value = 0.0;
  double error_bound = 0.0;
  long nodes = 0;
  double tolerance = 0.0;
  double discrepancy = 0.0;  // quantity judged against the tolerance
  bool pass = true;
  std::string note;
};

struct TargetReport {
  std::string target;
  nlohmann::ordered_json invariants;
  std::vector<IdentityResidual> residuals;
  std::vector<bool> residual_asserted;
  std::vector<IntegralEntry> integrals;
  bool classified = false;
  ClassificationReport classification;
  bool pass = true;
  double seconds = 0.0;
};

struct SuiteReport {
  std::vector<TargetReport> targets;
  std::uint64_t seed = 0;
  bool pass = true;
  double seconds = 0.0;
};

// Expands "all" to the catalog roster plus a default curve target, builds
// each target, and runs the structure, height, identity, integral, and
// classification suites against the configured tolerances.
SuiteReport run_suite(const std::vector<std::string>& targets,
                      const SuiteConfig& config);

// Builds a target by name: catalog grammar, "al:circle", or
// "al:k0-bracket=<lo>,<hi>".
Immersion build_target(const std::string& name);

QuadratureSpec auto_quadrature_spec(const Immersion& imm);

nlohmann::ordered_json suite_to_json(const SuiteReport& report,
                                     bool include_timings);

std::vector<std::string> expand_targets(const std::vector<std::string>& targets);

}  // namespace shrinklab
