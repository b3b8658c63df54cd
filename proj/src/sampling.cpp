#include "shrinklab/sampling.hpp"

namespace shrinklab {

double halton(std::uint64_t index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * (index % base);
    index /= base;
  }
  return r;
}

namespace {
constexpr int kBases[6] = {2, 3, 5, 7, 11, 13};
constexpr double kUnboundedBox = 2.5;
}  // namespace

std::vector<Vec> chart_sample_points(const Chart& chart, int count,
                                     std::uint64_t seed) {
  const int d = chart.dim();
  std::vector<Vec> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) {
    Vec u(d);
    for (int a = 0; a < d; ++a) {
      const double xi = halton(seed + 17 + i, kBases[a % 6]);
      const ChartAxis& ax = chart.axes[a];
      double lo = ax.unbounded ? -kUnboundedBox : ax.lo + ax.band_lo;
      double hi = ax.unbounded ? kUnboundedBox : ax.hi - ax.band_hi;
      // keep a small interior margin so stencils stay inside the domain
      if (!ax.unbounded) {
        const double margin = 0.02 * (hi - lo);
        lo += margin;
        hi -= margin;
      }
      u[a] = lo + (hi - lo) * xi;
    }
    pts.push_back(std::move(u));
  }
  return pts;
}

std::vector<SamplePointRef> sample_points(const Immersion& imm, int count,
                                          std::uint64_t seed) {
  std::vector<int> charts;
  for (int c = 0; c < static_cast<int>(imm.charts.size()); ++c)
    if (imm.charts[c].use_for_sampling) charts.push_back(c);
  std::vector<SamplePointRef> out;
  out.reserve(count);
  const int per = (count + static_cast<int>(charts.size()) - 1) /
                  static_cast<int>(charts.size());
  for (size_t k = 0; k < charts.size() && static_cast<int>(out.size()) < count;
       ++k) {
    auto pts = chart_sample_points(imm.charts[charts[k]], per,
                                   seed + 1000 * k);
    for (auto& u : pts) {
      if (static_cast<int>(out.size()) >= count) break;
      out.push_back({charts[k], std::move(u)});
    }
  }
  return out;
}

}  // namespace shrinklab
