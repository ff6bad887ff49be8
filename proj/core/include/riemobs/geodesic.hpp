#pragma once

// Geodesics of a metric field: initial value problems by fixed-step RK4
// with step halving on the constant-speed invariant, and two-point boundary
// value problems by single shooting.

#include <functional>
#include <optional>
#include <vector>

#include "riemobs/metric_field.hpp"

namespace riemobs {

struct GeodesicSample {
  double s = 0.0;
  Vec point;
  Vec velocity;
};

struct Geodesic {
  std::vector<GeodesicSample> samples;
  double s_start = 0.0;
  double s_end = 0.0;
  double energy = 0.0;  // integral of v^T P v ds
  double length = 0.0;  // integral of sqrt(v^T P v) ds
  double speed_drift = 0.0;  // max relative deviation of v^T P v from its initial value
  int steps = 0;

  const Vec& start() const { return samples.front().point; }
  const Vec& end() const { return samples.back().point; }
  const Vec& initial_velocity() const { return samples.front().velocity; }
};

struct GeodesicOptions {
  /// Optional validity predicate; leaving it is reported as LeftRegion.
  std::function<bool(const Vec&)> domain;
  double drift_tol = 1e-6;
  int max_halvings = 8;
  // boundary value problem
  int bvp_initial_steps = 16;
  int max_newton = 100;
  double bvp_tol = 1e-8;  // |gamma(1) - x2| <= bvp_tol * (1 + |x2|)
};

/// gamma'' = -Gamma(gamma)(gamma', gamma') at one point, as a function of
/// position and velocity.
Vec geodesic_acceleration(const MetricField& p, const Vec& x, const Vec& v);

/// Integrates from s = 0 to s_end starting with the given step, halving the
/// step until the speed drift is below opts.drift_tol.
/// Throws LeftRegion or StepFailure.
Geodesic geodesic_ivp(const MetricField& p, const Vec& x0, const Vec& v0, double s_end,
                      double step, const GeodesicOptions& opts = {});

/// One fixed-step RK4 integration with `steps` steps over [0, s_end]; no
/// refinement. Throws LeftRegion.
Geodesic geodesic_ivp_fixed(const MetricField& p, const Vec& x0, const Vec& v0, double s_end,
                            int steps, const GeodesicOptions& opts = {});

struct BvpResult {
  double distance = 0.0;
  Geodesic curve;
  int iterations = 0;
  double residual = 0.0;
  bool used_fallback = false;
};

/// Shortest connecting geodesic on s in [0, 1]. The initial guess for the
/// velocity is the chord x2 - x1 unless `warm_start` is given.
/// Throws NoConvergence (residual attached) or LeftRegion.
BvpResult geodesic_bvp(const MetricField& p, const Vec& x1, const Vec& x2,
                       const GeodesicOptions& opts = {},
                       const std::optional<Vec>& warm_start = std::nullopt);

inline double geodesic_bvp_distance(const MetricField& p, const Vec& x1, const Vec& x2,
                                    const GeodesicOptions& opts = {}) {
  return geodesic_bvp(p, x1, x2, opts).distance;
}

/// sqrt((x1 - x2)^T M (x1 - x2)) for a constant metric M.
double constant_metric_distance(const Mat& m, const Vec& x1, const Vec& x2);

}  // namespace riemobs
