#pragma once
#include <cstdint>
#include <vector>

#include "shrinklab/immersion.hpp"

namespace shrinklab {

// Low-discrepancy (Halton) points inside a chart domain, honoring exclusion
// bands; unbounded axes are sampled in [-2.5, 2.5]. The seed offsets the
// sequence, so reports are reproducible point-for-point.
std::vector<Vec> chart_sample_points(const Chart& chart, int count,
                                     std::uint64_t seed);

// (chart index, point) pairs distributed over the sampling charts.
struct SamplePointRef {
  int chart = 0;
  Vec u;
};
std::vector<SamplePointRef> sample_points(const Immersion& imm, int count,
                                          std::uint64_t seed);

double halton(std::uint64_t index, int base);

}  // namespace shrinklab
