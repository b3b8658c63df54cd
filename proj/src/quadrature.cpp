#include "shrinklab/quadrature.hpp"

#include <cmath>
#include <future>
#include <map>
#include <mutex>

#include "shrinklab/errors.hpp"
#include "shrinklab/shrinker_ops.hpp"

namespace shrinklab {

void QuadratureSpec::validate() const {
  if (nodes_per_axis < 4 || nodes_unbounded < 4)
    throw InvalidSpec("quadrature rule needs at least 4 nodes per axis");
  if (truncation_radius < 1.0)
    throw InvalidSpec("truncation radius must be >= 1");
}

void gauss_legendre(int n, Vec& nodes, Vec& weights) {
  static std::mutex mu;
  static std::map<int, std::pair<Vec, Vec>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) {
      nodes = it->second.first;
      weights = it->second.second;
      return;
    }
  }
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    weights[n - 1 - i] = weights[i];
  }
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(n, std::make_pair(nodes, weights));
}

namespace {

struct AxisRule {
  Vec nodes, weights;  // already mapped to the axis interval
};

std::vector<AxisRule> chart_rules(const Chart& chart,
                                  const QuadratureSpec& spec) {
  std::vector<AxisRule> rules(chart.dim());
  Vec xs, ws;
  for (int a = 0; a < chart.dim(); ++a) {
    const ChartAxis& ax = chart.axes[a];
    double lo = ax.lo, hi = ax.hi;
    int count = spec.nodes_per_axis;
    if (ax.unbounded) {
      lo = -spec.truncation_radius;
      hi = spec.truncation_radius;
      count = spec.nodes_unbounded;
    }
    gauss_legendre(count, xs, ws);
    AxisRule& r = rules[a];
    r.nodes.resize(count);
    r.weights.resize(count);
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (int i = 0; i < count; ++i) {
      r.nodes[i] = mid + half * xs[i];
      r.weights[i] = half * ws[i];
    }
  }
  return rules;
}

struct NodeEval {
  double density = 0.0;  // f * sqrt(det g) [* gaussian weight]
  bool skipped = false;
};

double eval_integrand(const Immersion& imm, int chart_idx, const Vec& u,
                      const Integrand& f, bool weighted, double& sqrt_det_g) {
  const Chart& chart = imm.charts[chart_idx];
  const int order = std::max(1, f.order);
  DerivTables t = oracle_tables(chart, imm.ambient, u, order);

  IntegrandContext ctx;
  ctx.imm = &imm;
  ctx.chart = chart_idx;
  ctx.u = u;

  PointGeometry pg;
  NormalDerivatives nd;
  if (order >= 2) {
    pg = pointwise_geometry_from_tables(imm, chart_idx, u, std::move(t));
    ctx.tables = &pg.tables;
    ctx.pg = &pg;
    if (order >= 3 && !f.light_order3) {
      nd = normal_derivatives_from_tables(imm, pg, pg.tables,
                                          /*with_hessian=*/false);
      ctx.nd = &nd;
    }
    sqrt_det_g = pg.sqrt_det_g;
    double v = f.eval(ctx);
    if (weighted) v *= std::exp(-0.5 * dot(pg.position, pg.position));
    return v * sqrt_det_g;
  }

  const int n = imm.dim;
  Mat g(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) g(a, b) = dot(t.d1[a], t.d1[b]);
  Mat L;
  if (!cholesky(g, L)) throw DegenerateImmersion("degenerate quadrature node");
  sqrt_det_g = std::sqrt(det_from_cholesky(L));
  ctx.tables = &t;
  double v = f.eval(ctx);
  if (weighted) v *= std::exp(-0.5 * dot(t.x, t.x));
  return v * sqrt_det_g;
}

// Gaussian tail factor: 2 * int_R^inf ((1+t)/(1+R))^k exp(-t^2/2) dt.
double tail_factor(double R, int k) {
  Vec xs, ws;
  gauss_legendre(64, xs, ws);
  const double span = 12.0;
  double s = 0.0;
  for (int i = 0; i < 64; ++i) {
    const double t = R + 0.5 * span * (xs[i] + 1.0);
    const double w = 0.5 * span * ws[i];
    s += w * std::pow((1.0 + t) / (1.0 + R), k) * std::exp(-0.5 * t * t);
  }
  return 2.0 * s;
}

struct ChartResult {
  double sum = 0.0;
  double tail = 0.0;
  long nodes = 0;
  long skipped = 0;
};

ChartResult integrate_chart(const Immersion& imm, int chart_idx,
                            const Integrand& f, const QuadratureSpec& spec,
                            bool weighted) {
  const Chart& chart = imm.charts[chart_idx];
  const int d = chart.dim();
  std::vector<AxisRule> rules = chart_rules(chart, spec);

  ChartResult out;
  KahanSum acc;
  std::vector<int> idx(d, 0);
  Vec u(d);
  while (true) {
    for (int a = 0; a < d; ++a) u[a] = rules[a].nodes[idx[a]];
    double w = 1.0;
    for (int a = 0; a < d; ++a) w *= rules[a].weights[idx[a]];
    ++out.nodes;
    if (!point_in_chart(chart, u)) {
      ++out.skipped;
    } else {
      double sq = 0.0;
      try {
        acc.add(w * eval_integrand(imm, chart_idx, u, f, weighted, sq));
      } catch (const DegenerateImmersion&) {
        bool banded = false;
        for (int a = 0; a < d; ++a) {
          const ChartAxis& ax = chart.axes[a];
          if (ax.band_lo > 0 && u[a] < ax.lo + ax.band_lo) banded = true;
          if (ax.band_hi > 0 && u[a] > ax.hi - ax.band_hi) banded = true;
        }
        if (!banded) throw;
        ++out.skipped;
      }
    }
    int a = 0;
    while (a < d && ++idx[a] == static_cast<int>(rules[a].nodes.size())) {
      idx[a] = 0;
      ++a;
    }
    if (a == d) break;
  }
  out.sum = acc.value();

  // Tail bound per unbounded axis: sample the truncation faces, envelope the
  // integrand beyond them by amp * ((1+t)/(1+R))^k with k capped at 2n+4.
  if (weighted) {
    const int kcap = 2 * imm.dim + 4;
    const double R = spec.truncation_radius;
    for (int a = 0; a < d; ++a) {
      if (!chart.axes[a].unbounded) continue;
      std::vector<int> others;
      for (int b = 0; b < d; ++b)
        if (b != a) others.push_back(b);

      // coarse rule (<= 12 nodes) on the remaining axes
      std::vector<AxisRule> frules(others.size());
      for (size_t o = 0; o < others.size(); ++o) {
        const ChartAxis& ax = chart.axes[others[o]];
        const double lo = ax.unbounded ? -R : ax.lo;
        const double hi = ax.unbounded ? R : ax.hi;
        Vec xs, ws;
        gauss_legendre(12, xs, ws);
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        frules[o].nodes.resize(12);
        frules[o].weights.resize(12);
        for (int i = 0; i < 12; ++i) {
          frules[o].nodes[i] = mid + half * xs[i];
          frules[o].weights[i] = half * ws[i];
        }
      }

      for (double side : {-1.0, 1.0}) {
        KahanSum face;
        std::vector<int> fidx(others.size(), 0);
        Vec fu(d);
        fu[a] = side * R;
        while (true) {
          double w = 1.0;
          for (size_t o = 0; o < others.size(); ++o) {
            fu[others[o]] = frules[o].nodes[fidx[o]];
            w *= frules[o].weights[fidx[o]];
          }
          try {
            double sq = 0.0;
            const double v = eval_integrand(imm, chart_idx, fu, f, true, sq);
            // strip the Gaussian factor along the truncated axis
            face.add(std::fabs(v) * w * std::exp(0.5 * fu[a] * fu[a]));
          } catch (const DegenerateImmersion&) {
          }
          size_t o = 0;
          while (o < others.size() &&
                 ++fidx[o] == static_cast<int>(frules[o].nodes.size())) {
            fidx[o] = 0;
            ++o;
          }
          if (o == others.size()) break;
        }
        out.tail += face.value() * tail_factor(R, kcap) / 2.0;
      }
    }
  }
  return out;
}

}  // namespace

WeightedIntegralResult weighted_integral(const Immersion& imm,
                                         const Integrand& f,
                                         const QuadratureSpec& spec,
                                         bool weighted) {
  spec.validate();
  if (!weighted && !imm.meta.compact)
    throw NonCompactUnweightedIntegral(
        "unweighted integral requested on non-compact target '" +
        imm.meta.name + "'");

  std::vector<int> charts;
  for (int c = 0; c < static_cast<int>(imm.charts.size()); ++c)
    if (imm.charts[c].use_for_integration) charts.push_back(c);
  if (charts.empty())
    throw InvalidSpec("immersion '" + imm.meta.name +
                      "' has no integration charts");

  std::vector<std::future<ChartResult>> futs;
  futs.reserve(charts.size());
  for (int c : charts)
    futs.push_back(std::async(std::launch::async, [&, c] {
      return integrate_chart(imm, c, f, spec, weighted);
    }));

  WeightedIntegralResult r;
  KahanSum acc;
  for (auto& fu : futs) {
    ChartResult cr = fu.get();
    acc.add(cr.sum);
    r.truncation_error_bound += cr.tail;
    r.node_count += cr.nodes;
    r.skipped_nodes += cr.skipped;
  }
  r.value = acc.value();
  return r;
}

Integrand builtin_integrand(const std::string& name) {
  Integrand f;
  f.name = name;
  if (name == "one") {
    f.order = 1;
    f.eval = [](const IntegrandContext&) { return 1.0; };
  } else if (name == "x2") {
    f.order = 1;
    f.eval = [](const IntegrandContext& c) {
      return dot(c.tables->x, c.tables->x);
    };
  } else if (name == "normH2") {
    f.order = 2;
    f.eval = [](const IntegrandContext& c) {
      return dot(c.pg->mean_curv_vec, c.pg->mean_curv_vec);
    };
  } else if (name == "normA2") {
    f.order = 2;
    f.eval = [](const IntegrandContext& c) { return c.pg->norm_A_sq; };
  } else if (name == "deficit") {
    f.order = 2;
    f.eval = [](const IntegrandContext& c) {
      return c.pg->n - dot(c.pg->mean_curv_vec, c.pg->mean_curv_vec);
    };
  } else if (name == "gradPerpH2") {
    f.order = 3;
    f.light_order3 = true;
    f.eval = [](const IntegrandContext& c) {
      return grad_H_norm_sq_from_tables(*c.pg, *c.tables);
    };
  } else if (name == "shrinkerResidual") {
    f.order = 2;
    f.eval = [](const IntegrandContext& c) {
      return shrinker_residual(*c.pg).norm;
    };
  } else {
    throw UnknownTarget("unknown integrand '" + name + "'");
  }
  return f;
}

namespace {

std::string quad_gate_warning(const Immersion& imm) {
  for (int c = 0; c < static_cast<int>(imm.charts.size()); ++c) {
    const Chart& ch = imm.charts[c];
    if (!ch.use_for_sampling) continue;
    Vec u(ch.dim());
    for (int a = 0; a < ch.dim(); ++a) {
      const ChartAxis& ax = ch.axes[a];
      u[a] = ax.unbounded ? 0.371 : ax.lo + 0.41 * (ax.hi - ax.lo);
    }
    PointGeometry pg = pointwise_geometry(imm, c, u);
    ShrinkerResidual sr = shrinker_residual(pg);
    if (sr.norm > kShrinkerGate)
      return "shrinker gate violated at a sample point (|H + x_perp| = " +
             std::to_string(sr.norm) + ")";
    break;
  }
  return {};
}

}  // namespace

GradHBalance gradH_balance(const Immersion& imm, const QuadratureSpec& spec) {
  GradHBalance b;
  b.warning = quad_gate_warning(imm);
  b.lhs = weighted_integral(imm, builtin_integrand("gradPerpH2"), spec);

  Integrand rhs_eq;
  rhs_eq.name = "sigmaHH_minus_H2";
  rhs_eq.order = 2;
  rhs_eq.eval = [](const IntegrandContext& c) {
    const PointGeometry& pg = *c.pg;
    double s = 0.0;
    for (int al = 0; al < pg.p; ++al)
      for (int be = 0; be < pg.p; ++be)
        s += pg.sigma(al, be) * pg.mean_curv_comp[al] * pg.mean_curv_comp[be];
    return s - dot(pg.mean_curv_vec, pg.mean_curv_vec);
  };
  b.rhs_equality = weighted_integral(imm, rhs_eq, spec);

  Integrand rhs_bd;
  rhs_bd.name = "A2_minus_1_times_H2";
  rhs_bd.order = 2;
  rhs_bd.eval = [](const IntegrandContext& c) {
    const PointGeometry& pg = *c.pg;
    return (pg.norm_A_sq - 1.0) * dot(pg.mean_curv_vec, pg.mean_curv_vec);
  };
  b.rhs_bound = weighted_integral(imm, rhs_bd, spec);

  b.equality_gap = std::fabs(b.lhs.value - b.rhs_equality.value);
  b.bound_slack = b.rhs_bound.value - b.lhs.value;
  return b;
}

PositionDriftIntegrals position_drift_integrals(const Immersion& imm,
                                                const QuadratureSpec& spec,
                                                bool want_unweighted) {
  PositionDriftIntegrals r;
  r.warning = quad_gate_warning(imm);

  Integrand ge;
  ge.name = "quarter_grad_x2_sq";
  ge.order = 1;
  ge.eval = [](const IntegrandContext& c) {
    const DerivTables& t = *c.tables;
    const int n = t.n;
    Mat g(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) g(a, b) = dot(t.d1[a], t.d1[b]);
    Mat K = spd_inverse(g);
    double s = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        s += K(a, b) * dot(t.x, t.d1[a]) * dot(t.x, t.d1[b]);
    return s;  // == (1/4)|grad |x|^2|^2
  };
  r.grad_energy = weighted_integral(imm, ge, spec);
  r.weighted_deficit = weighted_integral(imm, builtin_integrand("deficit"), spec);
  r.equality_gap = std::fabs(r.grad_energy.value - r.weighted_deficit.value);

  if (want_unweighted) {
    r.unweighted_deficit =
        weighted_integral(imm, builtin_integrand("deficit"), spec, false);
    r.has_unweighted = true;
  }
  return r;
}

}  // namespace shrinklab
