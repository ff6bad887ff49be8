#pragma once

// Small dense linear algebra shared by the geometry kernel.
//
// Generic routines (lu_solve, inverse) work for any scalar including nested
// duals; pivoting looks at the innermost value only. The double-only
// routines wrap Eigen decompositions.

#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "riemobs/dual.hpp"
#include "riemobs/errors.hpp"

namespace riemobs {

template <class T>
using VecX = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <class T>
using MatX = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Scalar type of a vector argument, for generic expressions.
template <class X>
using ScalarOf = typename std::decay_t<X>::Scalar;

/// Solves A X = B by Gaussian elimination with partial pivoting.
template <class T>
MatX<T> lu_solve(MatX<T> a, MatX<T> b) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || b.rows() != n) {
    throw Error(ErrorCode::DimensionMismatch, "lu_solve: shape mismatch");
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index piv = k;
    double best = std::abs(value_of(a(k, k)));
    for (Eigen::Index r = k + 1; r < n; ++r) {
      const double cand = std::abs(value_of(a(r, k)));
      if (cand > best) {
        best = cand;
        piv = r;
      }
    }
    if (best == 0.0) {
      throw Error(ErrorCode::SingularMatrix, "lu_solve: singular matrix");
    }
    if (piv != k) {
      a.row(k).swap(a.row(piv));
      b.row(k).swap(b.row(piv));
    }
    for (Eigen::Index r = k + 1; r < n; ++r) {
      const T factor = a(r, k) / a(k, k);
      for (Eigen::Index c = k; c < n; ++c) a(r, c) -= factor * a(k, c);
      for (Eigen::Index c = 0; c < b.cols(); ++c) b(r, c) -= factor * b(k, c);
    }
  }
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    for (Eigen::Index c = 0; c < b.cols(); ++c) {
      T acc = b(k, c);
      for (Eigen::Index j = k + 1; j < n; ++j) acc -= a(k, j) * b(j, c);
      b(k, c) = acc / a(k, k);
    }
  }
  return b;
}

template <class T>
MatX<T> inverse(const MatX<T>& a) {
  return lu_solve<T>(a, MatX<T>::Identity(a.rows(), a.rows()));
}

template <class T>
MatX<T> symmetrize(const MatX<T>& a) {
  MatX<T> s = a;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < a.cols(); ++j) {
      const T m = (a(i, j) + a(j, i)) * T(0.5);
      s(i, j) = m;
      s(j, i) = m;
    }
  }
  return s;
}

/// Innermost values of a dual-valued matrix.
template <class T>
Mat values_of(const MatX<T>& a) {
  Mat out(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out(i, j) = value_of(a(i, j));
  return out;
}

/// Lower Cholesky factor of a symmetric matrix, or nullopt when some pivot
/// falls below 1e-12 * trace(P) / n.
std::optional<Mat> cholesky_spd(const Mat& p);

/// Cholesky that throws SingularMetric with the offending point attached.
Mat cholesky_or_throw(const Mat& p, const Vec& at);

/// Solve P X = B given the lower Cholesky factor of P.
Mat cholesky_solve(const Mat& lower, const Mat& b);

/// Numerical rank from singular values with relative threshold.
int numerical_rank(const Mat& a, double rel_tol = 1e-10);

/// Orthonormal basis of ker(a) from a full SVD. Columns span the kernel.
Mat null_space(const Mat& a, double rel_tol = 1e-10);

/// Generalised symmetric eigenproblem A u = lambda B u, B SPD. Returns the
/// largest eigenvalue and its B-normalised eigenvector.
std::pair<double, Vec> max_generalized_eigen(const Mat& a, const Mat& b);

/// Largest principal angle (radians) between the column spans of a and b,
/// computed from sines so that tiny angles keep their precision.
double max_principal_angle(const Mat& a, const Mat& b);

}  // namespace riemobs
