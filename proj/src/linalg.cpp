#include "shrinklab/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "shrinklab/errors.hpp"

namespace shrinklab {

Mat mat_mul(const Mat& A, const Mat& B) {
  Mat C(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      double aik = A(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < B.cols; ++j) C(i, j) += aik * B(k, j);
    }
  return C;
}

Mat mat_add(const Mat& A, const Mat& B) {
  Mat C = A;
  for (size_t i = 0; i < C.a.size(); ++i) C.a[i] += B.a[i];
  return C;
}

Mat mat_scale(const Mat& A, double s) {
  Mat C = A;
  for (auto& v : C.a) v *= s;
  return C;
}

Mat transpose(const Mat& A) {
  Mat T(A.cols, A.rows);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) T(j, i) = A(i, j);
  return T;
}

Vec mat_vec(const Mat& A, const Vec& x) {
  Vec y(A.rows, 0.0);
  for (int i = 0; i < A.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < A.cols; ++j) s += A(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

bool cholesky(const Mat& A, Mat& L) {
  const int n = A.rows;
  L = Mat(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = A(i, j);
      for (int k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
      if (i == j) {
        if (s <= 0.0) return false;
        L(i, i) = std::sqrt(s);
      } else {
        L(i, j) = s / L(j, j);
      }
    }
  }
  return true;
}

Mat spd_inverse(const Mat& A) {
  Mat L;
  if (!cholesky(A, L))
    throw DegenerateImmersion("matrix not positive definite");
  const int n = A.rows;
  // Invert L (lower triangular), then A^{-1} = L^{-T} L^{-1}.
  Mat Linv(n, n);
  for (int i = 0; i < n; ++i) {
    Linv(i, i) = 1.0 / L(i, i);
    for (int j = 0; j < i; ++j) {
      double s = 0.0;
      for (int k = j; k < i; ++k) s += L(i, k) * Linv(k, j);
      Linv(i, j) = -s / L(i, i);
    }
  }
  Mat inv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = std::max(i, j); k < n; ++k) s += Linv(k, i) * Linv(k, j);
      inv(i, j) = s;
    }
  return inv;
}

double det_from_cholesky(const Mat& L) {
  double d = 1.0;
  for (int i = 0; i < L.rows; ++i) d *= L(i, i);
  return d * d;
}

void sym_eigen(const Mat& A, Vec& evals, Mat* evecs) {
  const int n = A.rows;
  Mat M = A;
  Mat V = Mat::identity(n);
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += M(p, q) * M(p, q);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::fabs(M(p, q)) < 1e-300) continue;
        double theta = (M(q, q) - M(p, p)) / (2.0 * M(p, q));
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double mkp = M(k, p), mkq = M(k, q);
          M(k, p) = c * mkp - s * mkq;
          M(k, q) = s * mkp + c * mkq;
        }
        for (int k = 0; k < n; ++k) {
          double mpk = M(p, k), mqk = M(q, k);
          M(p, k) = c * mpk - s * mqk;
          M(q, k) = s * mpk + c * mqk;
        }
        for (int k = 0; k < n; ++k) {
          double vkp = V(k, p), vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  evals.resize(n);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return M(i, i) < M(j, j); });
  Mat sorted(n, n);
  for (int i = 0; i < n; ++i) {
    evals[i] = M(order[i], order[i]);
    for (int k = 0; k < n; ++k) sorted(k, i) = V(k, order[i]);
  }
  if (evecs) *evecs = sorted;
}

}  // namespace shrinklab
