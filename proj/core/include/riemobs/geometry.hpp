#pragma once

// Pointwise differential geometry of a metric field: Christoffel symbols,
// Lie derivative, Riemannian gradient and Hessian, second fundamental form
// of an output map, and single curvature components.

#include <vector>

#include "riemobs/metric_field.hpp"
#include "riemobs/smooth_map.hpp"

namespace riemobs {

/// Christoffel symbols of the second kind at one point; gamma[c](a, b) is
/// Gamma^c_ab.
struct ChristoffelTensor {
  Vec point;
  std::vector<Mat> gamma;

  double operator()(int a, int b, int c) const { return gamma[c](a, b); }
  int dim() const { return static_cast<int>(gamma.size()); }
  /// sqrt of the sum of squares of all components.
  double norm() const;
  /// Gamma(v, v), the quadratic term of the geodesic equation.
  Vec contract(const Vec& v) const;
};

/// Christoffel symbols at a point of scalar type T from the metric value and
/// its partials at that point.
template <class T>
std::vector<MatX<T>> christoffel_from(const MatX<T>& p, const std::vector<MatX<T>>& dp) {
  const Eigen::Index n = p.rows();
  // first kind: G_abd = 1/2 (d_b P_ad + d_a P_bd - d_d P_ab)
  MatX<T> first(n * n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      for (Eigen::Index d = 0; d < n; ++d)
        first(a * n + b, d) = T(0.5) * (dp[b](a, d) + dp[a](b, d) - dp[d](a, b));
  const MatX<T> second = lu_solve<T>(p, MatX<T>(first.transpose()));  // n x n*n
  std::vector<MatX<T>> out(n, MatX<T>(n, n));
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b) out[c](a, b) = second(c, a * n + b);
  return out;
}

/// Throws SingularMetric when P(x) fails the Cholesky test.
ChristoffelTensor christoffel(const MetricField& p, const Vec& x);

/// L_f P(x) = dP[f] + P df + df^T P.
Mat lie_derivative_metric(const MetricField& p, const SmoothMap& f, const Vec& x);

/// P(x)^{-1} dh(x)^T, one column per output.
Mat riemannian_gradient(const MetricField& p, const SmoothMap& h, const Vec& x);

/// Riemannian Hessian of each output component.
std::vector<Mat> riemannian_hessian(const MetricField& p, const SmoothMap& h, const Vec& x);

/// Second fundamental form of h : (R^n, P) -> (R^p, Q).
std::vector<Mat> second_fundamental_form(const MetricField& p, const MetricField& q,
                                         const SmoothMap& h, const Vec& x);

/// Same as second_fundamental_form with the pieces used for the nullity
/// tolerance: ||d^2 h_i||_F, ||Gamma|| and ||dh||_F.
struct SffEvaluation {
  std::vector<Mat> ii;
  std::vector<double> hessian_norms;
  double gamma_norm = 0.0;
  double dh_norm = 0.0;
  Mat dh;

  /// ||II^i||_F / (1 + ||d^2 h_i|| + ||Gamma|| ||dh||), maximised over i.
  double scaled_norm() const;
};
SffEvaluation evaluate_sff(const MetricField& p, const MetricField& q, const SmoothMap& h,
                           const Vec& x);

/// Transport of II under x_bar = phi(x), y_bar = psi(y): returns II_bar at
/// phi(x) given II at x and the two Jacobians.
std::vector<Mat> transform_sff(const Mat& dphi, const Mat& dpsi, const std::vector<Mat>& ii);

/// Riemann tensor component R^a_{bcd} = d_c Gamma^a_db - d_d Gamma^a_cb
/// + Gamma^a_ce Gamma^e_db - Gamma^a_de Gamma^e_cb.
double curvature_component(const MetricField& p, const Vec& x, int a, int b, int c, int d);

/// g^bd R^a_bad. For a surface this is twice the Gaussian curvature.
double scalar_curvature(const MetricField& p, const Vec& x);
/// Sectional curvature of the coordinate plane (i, j), R_ijij / (P_ii P_jj - P_ij^2)
/// with the index lowered on the first slot.
double sectional_curvature(const MetricField& p, const Vec& x, int i, int j);

}  // namespace riemobs
