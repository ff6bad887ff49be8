#pragma once

#include <functional>

#include "riemobs/metric_field.hpp"
#include "riemobs/smooth_map.hpp"

namespace riemobs {

/// Output gap function wp(y1, y2) and its gradient in the first argument.
struct GapFunction {
  std::function<double(const Vec&, const Vec&)> eval;
  std::function<Vec(const Vec&, const Vec&)> grad1;

  /// d^2 wp / dy1^2 at (y, y) by central differences of grad1.
  Mat diagonal_hessian(const Vec& y) const;
};

/// Squared Q-distance. With flat = false Q must be constant and
/// wp = (y1 - y2)^T Q (y1 - y2). With flat = true `psi` is an output chart in
/// which Q is Euclidean (Q = dpsi^T dpsi) and wp = |psi(y1) - psi(y2)|^2.
/// Throws UnsupportedQ for a varying Q without a flattening chart.
GapFunction gap_sq_distance(const MetricField& q, bool flat = false, const SmoothMap* psi = nullptr);

}  // namespace riemobs
