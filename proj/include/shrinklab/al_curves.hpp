#pragma once
#include <string>
#include <vector>

#include "shrinklab/immersion.hpp"

namespace shrinklab {

// State of the planar curve integrator: position, unit tangent, arclength.
struct ALState {
  Vec x{0.0, 0.0};
  Vec tangent{0.0, 1.0};
  double arclength = 0.0;
};

struct ALSample {
  double s = 0.0;
  double x1 = 0.0, x2 = 0.0;
  double t1 = 0.0, t2 = 0.0;
  double k = 0.0;
};

struct ALCurve {
  std::vector<ALSample> samples;
  bool closed = false;
  int rotation_p = 0, rotation_q = 0;  // rotation index p/q when closed
  double first_integral_drift = 0.0;
  double closure_residual = 0.0;
  double length() const { return samples.empty() ? 0.0 : samples.back().s; }
};

// Integrates x' = T, T' = k N with N the +90 degree rotation of T and the
// curvature imposed pointwise as k = -<x, N>, so the curve satisfies the
// planar shrinker equation by construction. Classical RK4; the tangent is
// renormalized each step. Throws StepTooLarge when the first-integral drift
// exceeds 1e-6 per unit arclength.
ALCurve al_integrate(const ALState& initial, double length, double step);

// Max deviation of the conserved quantity k * exp(-|x|^2/2) from its median.
double al_first_integral(const ALCurve& curve);

struct ALShootConfig {
  double k0_min = 1.05;
  double k0_max = 2.5;
  int rotation_p = 2;
  int rotation_q = 3;
  double step = 1e-3;
  double angle_tol = 1e-12;
  int max_bisections = 80;
  double resample_step = 2e-4;  // sampling density of the returned curve
};

// Launches at x = (k0, 0), T = (0, 1) (a curvature vertex, since k = r there),
// measures the polar angle swept to the next vertex, and bisects k0 until the
// angle equals pi * p / q; the closed curve then consists of 2q vertex arcs.
// k0 == 1 is the circle fixed point. Throws NoClosure when the bracket does
// not contain a sign change.
ALCurve al_shoot_closed(const ALShootConfig& config);

// Wraps a closed curve as a 1-chart immersion over a periodic cubic spline
// with a finite-difference derivative oracle.
Immersion curve_to_immersion(const ALCurve& curve, const std::string& name);

// CSV export with header s,x1,x2,k.
void write_curve_csv(const ALCurve& curve, const std::string& path);

}  // namespace shrinklab
