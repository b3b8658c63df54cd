#pragma once
#include <cmath>
#include <cstddef>
#include <vector>

namespace shrinklab {

// Dense row-major matrix sized for chart/ambient dimensions (<= 6).
struct Mat {
  int rows = 0, cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

  double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
};

using Vec = std::vector<double>;

inline double dot(const Vec& x, const Vec& y) {
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm(const Vec& x) { return std::sqrt(dot(x, x)); }

inline void axpy(double a, const Vec& x, Vec& y) {
  for (size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

inline Vec scaled(const Vec& x, double a) {
  Vec r = x;
  for (auto& v : r) v *= a;
  return r;
}

inline Vec vsub(const Vec& x, const Vec& y) {
  Vec r = x;
  for (size_t i = 0; i < r.size(); ++i) r[i] -= y[i];
  return r;
}

inline Vec vadd(const Vec& x, const Vec& y) {
  Vec r = x;
  for (size_t i = 0; i < r.size(); ++i) r[i] += y[i];
  return r;
}

Mat mat_mul(const Mat& A, const Mat& B);
Mat mat_add(const Mat& A, const Mat& B);
Mat mat_scale(const Mat& A, double s);
Mat transpose(const Mat& A);
Vec mat_vec(const Mat& A, const Vec& x);

// Cholesky of an SPD matrix; returns false if a pivot is not positive.
bool cholesky(const Mat& A, Mat& L);
Mat spd_inverse(const Mat& A);          // throws DegenerateImmersion on failure
double det_from_cholesky(const Mat& L);  // det(A) = prod diag(L)^2

// Cyclic Jacobi eigensolver for symmetric matrices (ascending eigenvalues).
void sym_eigen(const Mat& A, Vec& evals, Mat* evecs = nullptr);

// Compensated accumulation; keeps tensor-rule sums run-to-run stable.
struct KahanSum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  double value() const { return s; }
};

}  // namespace shrinklab
