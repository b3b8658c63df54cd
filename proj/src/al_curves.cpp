#include "shrinklab/al_curves.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>

#include "shrinklab/errors.hpp"

namespace shrinklab {

namespace {

struct State {
  double x1, x2, t1, t2;
};

// k = -<x, N> with N = (-t2, t1); the shrinker equation holds by construction.
inline double curvature(const State& s) { return s.x1 * s.t2 - s.x2 * s.t1; }

inline State deriv(const State& s) {
  const double k = curvature(s);
  return State{s.t1, s.t2, -k * s.t2, k * s.t1};
}

State rk4_step(const State& s, double h) {
  auto add = [](const State& a, const State& b, double w) {
    return State{a.x1 + w * b.x1, a.x2 + w * b.x2, a.t1 + w * b.t1,
                 a.t2 + w * b.t2};
  };
  State k1 = deriv(s);
  State k2 = deriv(add(s, k1, h / 2));
  State k3 = deriv(add(s, k2, h / 2));
  State k4 = deriv(add(s, k3, h));
  State out = s;
  out.x1 += h / 6 * (k1.x1 + 2 * k2.x1 + 2 * k3.x1 + k4.x1);
  out.x2 += h / 6 * (k1.x2 + 2 * k2.x2 + 2 * k3.x2 + k4.x2);
  out.t1 += h / 6 * (k1.t1 + 2 * k2.t1 + 2 * k3.t1 + k4.t1);
  out.t2 += h / 6 * (k1.t2 + 2 * k2.t2 + 2 * k3.t2 + k4.t2);
  const double nt = std::sqrt(out.t1 * out.t1 + out.t2 * out.t2);
  out.t1 /= nt;
  out.t2 /= nt;
  return out;
}

ALSample to_sample(const State& s, double arc) {
  return ALSample{arc, s.x1, s.x2, s.t1, s.t2, curvature(s)};
}

}  // namespace

ALCurve al_integrate(const ALState& initial, double length, double step) {
  if (!(step > 0.0)) throw InvalidParameter("step must be positive");
  State s{initial.x[0], initial.x[1], initial.tangent[0], initial.tangent[1]};
  const double nt = std::sqrt(s.t1 * s.t1 + s.t2 * s.t2);
  if (std::fabs(nt - 1.0) > 1e-9)
    throw InvalidParameter("initial tangent must be a unit vector");
  s.t1 /= nt;
  s.t2 /= nt;

  ALCurve curve;
  const long nsteps = std::max(1L, static_cast<long>(std::ceil(length / step - 1e-12)));
  const double h = length / nsteps;  // uniform, h <= step, lands on `length`
  curve.samples.reserve(nsteps + 1);
  double arc = initial.arclength;
  curve.samples.push_back(to_sample(s, arc));
  for (long i = 0; i < nsteps; ++i) {
    s = rk4_step(s, h);
    arc += h;
    curve.samples.push_back(to_sample(s, arc));
  }
  curve.first_integral_drift = al_first_integral(curve);
  if (curve.first_integral_drift > 1e-6 * std::max(1.0, length))
    throw StepTooLarge("first-integral drift " +
                       std::to_string(curve.first_integral_drift) +
                       " exceeds 1e-6 per unit arclength; reduce the step");
  return curve;
}

double al_first_integral(const ALCurve& curve) {
  if (curve.samples.empty()) return 0.0;
  Vec vals;
  vals.reserve(curve.samples.size());
  for (const ALSample& s : curve.samples)
    vals.push_back(s.k * std::exp(-0.5 * (s.x1 * s.x1 + s.x2 * s.x2)));
  Vec sorted = vals;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2,
                   sorted.end());
  const double med = sorted[sorted.size() / 2];
  double drift = 0.0;
  for (double v : vals) drift = std::max(drift, std::fabs(v - med));
  return drift;
}

namespace {

struct ArcResult {
  double angle = 0.0;   // polar angle swept to the next vertex
  double length = 0.0;
  State end{};
};

// Integrates from a vertex (f = <x,T> = 0) to the next vertex, accumulating
// the swept polar angle. Bisection refines the crossing inside a step.
ArcResult integrate_arc(const State& start, double step) {
  State s = start;
  double angle = 0.0, arc = 0.0;
  auto f = [](const State& st) { return st.x1 * st.t1 + st.x2 * st.t2; };
  auto angle_inc = [](const State& a, const State& b) {
    return std::atan2(a.x1 * b.x2 - a.x2 * b.x1,
                      a.x1 * b.x1 + a.x2 * b.x2);
  };

  // move off the initial zero of f
  State prev = s;
  s = rk4_step(s, step);
  angle += angle_inc(prev, s);
  arc += step;
  const double dir = f(s) > 0 ? 1.0 : -1.0;

  const long cap = static_cast<long>(200.0 / step);
  for (long i = 0; i < cap; ++i) {
    prev = s;
    s = rk4_step(s, step);
    arc += step;
    angle += angle_inc(prev, s);
    if (dir * f(s) <= 0.0) {
      // refine within [arc-step, arc]
      double lo = 0.0, hi = step;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        State sm = rk4_step(prev, mid);
        if (dir * f(sm) <= 0.0)
          hi = mid;
        else
          lo = mid;
      }
      State send = rk4_step(prev, hi);
      angle -= angle_inc(prev, s);
      angle += angle_inc(prev, send);
      arc = arc - step + hi;
      return ArcResult{angle, arc, send};
    }
  }
  throw NoClosure("no vertex crossing found within the arclength cap");
}

State launch_state(double k0) { return State{k0, 0.0, 0.0, 1.0}; }

ALCurve circle_curve(double resample_step) {
  ALCurve c;
  const double L = 2.0 * M_PI;
  const long N = std::lround(L / resample_step);
  const double h = L / N;
  c.samples.reserve(N + 1);
  for (long i = 0; i <= N; ++i) {
    const double s = h * i;
    c.samples.push_back(ALSample{s, std::cos(s), std::sin(s), -std::sin(s),
                                 std::cos(s), 1.0});
  }
  c.closed = true;
  c.rotation_p = 1;
  c.rotation_q = 1;
  c.first_integral_drift = 0.0;
  c.closure_residual = 0.0;
  return c;
}

}  // namespace

ALCurve al_shoot_closed(const ALShootConfig& cfg) {
  if (!(cfg.k0_min > 0.0) || !(cfg.k0_max >= cfg.k0_min))
    throw InvalidParameter("invalid k0 bracket");
  if (cfg.rotation_q < 1 || cfg.rotation_q > 5 || cfg.rotation_p < 1)
    throw InvalidParameter("rotation target limited to small q (<= 5)");

  if (std::fabs(cfg.k0_min - 1.0) < 1e-9 && std::fabs(cfg.k0_max - 1.0) < 1e-9)
    return circle_curve(cfg.resample_step);

  const double target =
      M_PI * static_cast<double>(cfg.rotation_p) / cfg.rotation_q;
  auto defect = [&](double k0) {
    return integrate_arc(launch_state(k0), cfg.step).angle - target;
  };

  double lo = cfg.k0_min, hi = cfg.k0_max;
  double flo = defect(lo), fhi = defect(hi);
  if (flo * fhi > 0.0)
    throw NoClosure("angle defect does not change sign over the k0 bracket");
  for (int it = 0; it < cfg.max_bisections; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = defect(mid);
    if (std::fabs(fm) < cfg.angle_tol || hi - lo < 1e-15) break;
    if (flo * fm <= 0.0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  const double k0 = 0.5 * (lo + hi);

  // One arc fixes the period; the closed curve is 2q arcs long.
  ArcResult arc = integrate_arc(launch_state(k0), cfg.step);
  const double L = 2.0 * cfg.rotation_q * arc.length;
  const long N = std::lround(L / cfg.resample_step);
  const double h = L / N;

  State s = launch_state(k0);
  ALCurve curve;
  curve.samples.reserve(N + 1);
  curve.samples.push_back(to_sample(s, 0.0));
  for (long i = 0; i < N; ++i) {
    s = rk4_step(s, h);
    curve.samples.push_back(to_sample(s, h * (i + 1)));
  }
  const ALSample& first = curve.samples.front();
  const ALSample& last = curve.samples.back();
  curve.closure_residual =
      std::hypot(last.x1 - first.x1, last.x2 - first.x2) +
      std::hypot(last.t1 - first.t1, last.t2 - first.t2);
  curve.closed = true;
  curve.rotation_p = cfg.rotation_p;
  curve.rotation_q = cfg.rotation_q;
  curve.first_integral_drift = al_first_integral(curve);
  return curve;
}

namespace {

// Periodic C^2 cubic spline on uniform knots (cyclic tridiagonal solve).
struct PeriodicSpline {
  double h = 0.0, L = 0.0;
  std::vector<double> y, m;  // values and second derivatives, size N (period)

  void build(const std::vector<double>& values, double spacing) {
    const int N = static_cast<int>(values.size());
    y = values;
    h = spacing;
    L = spacing * N;
    std::vector<double> d(N);
    for (int i = 0; i < N; ++i) {
      const double ym = y[(i + N - 1) % N], y0 = y[i], yp = y[(i + 1) % N];
      d[i] = 6.0 * (yp - 2.0 * y0 + ym) / (h * h);
    }
    // cyclic system m_{i-1} + 4 m_i + m_{i+1} = d_i via Sherman-Morrison
    const int N2 = N;
    const double gamma = -4.0;
    std::vector<double> b(N2, 4.0);
    b[0] = 4.0 - gamma;
    b[N2 - 1] = 4.0 - 1.0 / gamma;
    auto thomas = [&](const std::vector<double>& rhs) {
      std::vector<double> c(N2, 1.0), bb = b, r = rhs;
      for (int i = 1; i < N2; ++i) {
        const double w = 1.0 / bb[i - 1];
        bb[i] -= w * c[i - 1];
        r[i] -= w * r[i - 1];
      }
      std::vector<double> x(N2);
      x[N2 - 1] = r[N2 - 1] / bb[N2 - 1];
      for (int i = N2 - 2; i >= 0; --i) x[i] = (r[i] - c[i] * x[i + 1]) / bb[i];
      return x;
    };
    std::vector<double> u(N2, 0.0);
    u[0] = gamma;
    u[N2 - 1] = 1.0;
    std::vector<double> sy = thomas(d);
    std::vector<double> sz = thomas(u);
    const double vy = sy[0] + sy[N2 - 1] / gamma;
    const double vz = sz[0] + sz[N2 - 1] / gamma;
    const double fac = vy / (1.0 + vz);
    m.resize(N2);
    for (int i = 0; i < N2; ++i) m[i] = sy[i] - fac * sz[i];
  }

  double eval(double s) const {
    const int N = static_cast<int>(y.size());
    double t = std::fmod(s, L);
    if (t < 0) t += L;
    int i = static_cast<int>(t / h);
    if (i >= N) i = N - 1;
    const double a = t - i * h;
    const double b2 = h - a;
    const double yi = y[i], yj = y[(i + 1) % N];
    const double mi = m[i], mj = m[(i + 1) % N];
    return (mi * b2 * b2 * b2 + mj * a * a * a) / (6.0 * h) +
           (yi / h - mi * h / 6.0) * b2 + (yj / h - mj * h / 6.0) * a;
  }
};

}  // namespace

Immersion curve_to_immersion(const ALCurve& curve, const std::string& name) {
  if (!curve.closed || curve.samples.size() < 16)
    throw InvalidParameter("curve-to-immersion bridge needs a closed curve");

  const int N = static_cast<int>(curve.samples.size()) - 1;  // last repeats first
  const double h = curve.samples[1].s - curve.samples[0].s;
  std::vector<double> x1(N), x2(N);
  for (int i = 0; i < N; ++i) {
    x1[i] = curve.samples[i].x1;
    x2[i] = curve.samples[i].x2;
  }
  auto s1 = std::make_shared<PeriodicSpline>();
  auto s2 = std::make_shared<PeriodicSpline>();
  s1->build(x1, h);
  s2->build(x2, h);

  Immersion imm;
  imm.dim = 1;
  imm.codim = 1;
  imm.ambient = 2;
  imm.meta.name = name;
  imm.meta.compact = true;
  imm.meta.polynomial_volume_growth = true;

  Chart ch;
  ch.name = "spline";
  ChartAxis ax;
  ax.lo = 0.0;
  ax.hi = s1->L;
  ch.axes.push_back(ax);
  ch.map_d = [s1, s2](const double* u, double* x) {
    x[0] = s1->eval(u[0]);
    x[1] = s2->eval(u[0]);
  };
  ch.oracle = OracleKind::finite_difference;
  ch.max_order = 4;
  ch.fd_coordinate_scale = 1.0;  // steps in plain arclength units
  ch.use_for_sampling = true;
  ch.use_for_integration = true;
  imm.charts.push_back(ch);
  return imm;
}

void write_curve_csv(const ALCurve& curve, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write CSV file '" + path + "'");
  out << "s,x1,x2,k\n";
  char buf[160];
  for (const ALSample& s : curve.samples) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g\n", s.s, s.x1,
                  s.x2, s.k);
    out << buf;
  }
}

}  // namespace shrinklab
