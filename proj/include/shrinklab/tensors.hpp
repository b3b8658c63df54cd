#pragma once
#include <cstddef>
#include <vector>

namespace shrinklab {

struct Tens3 {
  int d0 = 0, d1 = 0, d2 = 0;
  std::vector<double> v;
  Tens3() = default;
  Tens3(int a, int b, int c)
      : d0(a), d1(b), d2(c), v(static_cast<size_t>(a) * b * c, 0.0) {}
  double& operator()(int i, int j, int k) {
    return v[(static_cast<size_t>(i) * d1 + j) * d2 + k];
  }
  double operator()(int i, int j, int k) const {
    return v[(static_cast<size_t>(i) * d1 + j) * d2 + k];
  }
};

struct Tens4 {
  int d0 = 0, d1 = 0, d2 = 0, d3 = 0;
  std::vector<double> v;
  Tens4() = default;
  Tens4(int a, int b, int c, int d)
      : d0(a), d1(b), d2(c), d3(d),
        v(static_cast<size_t>(a) * b * c * d, 0.0) {}
  double& operator()(int i, int j, int k, int l) {
    return v[((static_cast<size_t>(i) * d1 + j) * d2 + k) * d3 + l];
  }
  double operator()(int i, int j, int k, int l) const {
    return v[((static_cast<size_t>(i) * d1 + j) * d2 + k) * d3 + l];
  }
};

}  // namespace shrinklab
