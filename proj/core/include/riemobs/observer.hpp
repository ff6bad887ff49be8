#pragma once

// Plant/observer co-simulation with the gradient correction
//   xhat' = f(xhat) - k_E(xhat) P(xhat)^-1 dh(xhat)^T d1wp(h(xhat), y)
// and checks of the distance contraction bound along the run.

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "riemobs/conditions.hpp"
#include "riemobs/gap.hpp"
#include "riemobs/geodesic.hpp"
#include "riemobs/region.hpp"

namespace riemobs {

enum class DistanceMethod { Geodesic, ConstantMetric, EuclideanBound };
std::string_view to_string(DistanceMethod m);

struct ObserverConfig {
  /// k_E as a function of the observer state.
  std::function<double(const Vec&)> gain = [](const Vec&) { return 1.0; };
  /// Radius of the (user-asserted) basin; runs starting farther are rejected.
  double basin = std::numeric_limits<double>::infinity();
  double dt = 0.01;
  double horizon = 10.0;
  /// Target contraction rate for the certificate.
  double rate = 0.0;
  /// Distances are computed every `sample_every` integration steps.
  int sample_every = 10;
  DistanceMethod method = DistanceMethod::Geodesic;
  /// Metric eigenvalue bounds over the region, used by EuclideanBound.
  double lambda_min = 0.0;
  double lambda_max = 0.0;

  static ObserverConfig with_constant_gain(double k);
  void validate() const;
};

struct ObserverRun {
  std::vector<double> times;
  std::vector<Vec> x;
  std::vector<Vec> xhat;
  std::vector<Vec> y;
  /// Distance at each recorded time; NaN where the solver failed.
  std::vector<double> dist;
  /// Lower/upper bounds; equal to dist for exact methods.
  std::vector<double> dist_lo;
  std::vector<double> dist_hi;
  std::vector<bool> valid;
  DistanceMethod method = DistanceMethod::Geodesic;
  bool truncated = false;
  std::string truncation_reason;
  int missing_distances = 0;

  std::size_t size() const { return times.size(); }
};

/// F(xhat, y).
Vec observer_field(const SystemModel& model, const MetricField& p, const GapFunction& gap,
                   const ObserverConfig& cfg, const Vec& xhat, const Vec& y);

/// Smallest and largest eigenvalues of P over region samples.
std::pair<double, double> metric_eigen_bounds(const MetricField& p, const Region& region,
                                              int samples = 512, std::uint64_t seed = 0);

/// Distance between xhat and x by the configured method. `warm` carries the
/// previous shooting velocity between calls.
struct DistanceValue {
  double value = std::numeric_limits<double>::quiet_NaN();
  double lo = std::numeric_limits<double>::quiet_NaN();
  double hi = std::numeric_limits<double>::quiet_NaN();
};
DistanceValue observer_distance(const MetricField& p, const ObserverConfig& cfg, const Vec& xhat,
                                const Vec& x, std::optional<Vec>* warm = nullptr);

/// RK4 co-integration. Throws LeftRegion if the initial states are outside
/// the model region, PreconditionViolation if the initial distance exceeds
/// the basin. Later exits truncate and flag the run.
ObserverRun simulate(const SystemModel& model, const MetricField& p, const GapFunction& gap,
                     const ObserverConfig& cfg, const Vec& x0, const Vec& xhat0);

struct CertificateReport {
  Verdict verdict = Verdict::Inconclusive;
  double rate = 0.0;
  int samples = 0;
  std::optional<double> first_violation_time;
  /// max over steps of d_{k+1} / (d_k e^{-rate dt}); <= 1 + slack passes.
  double worst_ratio = 0.0;
};

inline constexpr double kEnvelopeSlack = 1e-3;
/// Distances below this are treated as zero by the envelope check.
inline constexpr double kDistanceFloor = 1e-9;

/// Checks d_{k+1} <= d_k exp(-rate dt) (1 + slack) over the valid window.
/// EuclideanBound runs compare the upper bound against the lower bound and
/// report inconclusive instead of fail. Throws InsufficientSamples below 10
/// distance samples.
CertificateReport contraction_certificate(const ObserverRun& run, double rate, double slack = kEnvelopeSlack);

/// -slope of a least-squares line through (t, log d) on the valid window.
double fitted_decay_rate(const ObserverRun& run);

struct GainScanEntry {
  double gain = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  double fitted_rate = 0.0;
  double worst_ratio = 0.0;
};

struct GainScan {
  std::vector<GainScanEntry> entries;
  std::optional<double> chosen;
  ObserverRun run;  // run at the chosen gain, or the last one tried
};

/// Scans constant k_E over {1, 2, 4, ..., 1024} and stops at the first gain
/// whose run passes the certificate at `cfg.rate`.
GainScan scan_gain(const SystemModel& model, const MetricField& p, const GapFunction& gap,
                   ObserverConfig cfg, const Vec& x0, const Vec& xhat0);

/// gamma'(end)^T P(xhat) c(xhat, h(x)) along the geodesic from x to xhat,
/// where c is the gradient correction scaled by `scale`.
double gain_margin_probe(const SystemModel& model, const MetricField& p, const GapFunction& gap,
                         double gain, const Vec& x, const Vec& xhat, double scale = 1.0);

}  // namespace riemobs
