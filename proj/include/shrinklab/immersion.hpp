#pragma once
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "shrinklab/jet.hpp"
#include "shrinklab/linalg.hpp"

namespace shrinklab {

enum class OracleKind { closed_form, finite_difference };

struct ChartAxis {
  double lo = 0.0, hi = 0.0;
  bool unbounded = false;
  // Exclusion bands next to coordinate singularities at the interval ends
  // (width in chart units); sampling and quadrature stay outside them.
  double band_lo = 0.0, band_hi = 0.0;
};

struct Chart {
  std::string name;
  std::vector<ChartAxis> axes;
  std::function<void(const double*, double*)> map_d;
  std::function<void(const Jet*, Jet*)> map_j;  // empty for FD-only charts
  OracleKind oracle = OracleKind::closed_form;
  int max_order = 4;
  bool use_for_sampling = true;
  bool use_for_integration = false;
  // 0 = steps relative to max(1, |coordinate|); > 0 = fixed coordinate scale.
  double fd_coordinate_scale = 0.0;

  int dim() const { return static_cast<int>(axes.size()); }
};

// Builds both scalar and jet maps from one templated functor.
template <typename F>
void set_chart_map(Chart& chart, F f) {
  chart.map_d = [f](const double* u, double* x) { f(u, x); };
  chart.map_j = [f](const Jet* u, Jet* x) { f(u, x); };
}

struct OverlapPoint {
  int chart_a = 0;
  std::vector<double> ua;
  int chart_b = 0;
  std::vector<double> ub;
};

struct ExpectedInvariants {
  std::optional<double> norm_H_sq;
  std::optional<double> norm_A_sq;
  std::optional<double> norm_x_sq;  // present when |x|^2 is constant
};

struct Metadata {
  std::string name;
  bool compact = true;
  bool expected_shrinker = true;
  // established for catalog entries; "assumed" in reports otherwise
  bool polynomial_volume_growth = false;
  ExpectedInvariants expected;
  std::vector<OverlapPoint> overlap_points;
};

struct Immersion {
  int dim = 0;      // n
  int codim = 0;    // p
  int ambient = 0;  // n + p
  std::vector<Chart> charts;
  Metadata meta;
  double rank_tol = 1e-12;  // relative floor on metric eigenvalues
};

// Partial derivatives of the chart map at a point, up to `order`.
// dN[a][b]... index chart axes; each entry is an ambient vector.
struct DerivTables {
  int n = 0, amb = 0, order = 0;
  Vec x;
  std::vector<Vec> d1;
  std::vector<std::vector<Vec>> d2;
  std::vector<std::vector<std::vector<Vec>>> d3;
  std::vector<std::vector<std::vector<std::vector<Vec>>>> d4;
};

// Evaluates the chart map value only.
Vec chart_point(const Chart& chart, int ambient, const Vec& u);

// Derivative oracle: closed-form via jets, or nested central differences.
// Throws OracleOrderUnavailable when the chart cannot supply `order`.
DerivTables oracle_tables(const Chart& chart, int ambient, const Vec& u,
                          int order);

// True when u lies inside the domain and outside all exclusion bands.
// Unbounded axes accept any coordinate.
bool point_in_chart(const Chart& chart, const Vec& u);

}  // namespace shrinklab
