#pragma once
#include "shrinklab/point_geometry.hpp"
#include "shrinklab/tensors.hpp"

namespace shrinklab {

// Curvature tensors assembled algebraically from the second fundamental form,
// in orthonormal frame components.
struct CurvatureTensors {
  Tens4 riemann;       // R_ijkl
  Mat ricci;           // R_ik
  double scalar = 0.0;             // |H|^2 - |A|^2
  double scalar_from_trace = 0.0;  // sum_i R_ii, stored independently
  Tens4 normal_curvature;          // R_{alpha beta i j}
};

CurvatureTensors curvature_tensors(const PointGeometry& pg);

}  // namespace shrinklab
