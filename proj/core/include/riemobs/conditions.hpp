#pragma once

// Sampled checks of detectability (A2), second-fundamental-form nullity and
// direct geodesic monotonicity (A3), and the Riemannian submersion property.
// All verdicts are sample-based: "pass" means no sample violated the
// condition, not that the condition is certified on the whole region.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "riemobs/gap.hpp"
#include "riemobs/geodesic.hpp"
#include "riemobs/geometry.hpp"
#include "riemobs/region.hpp"

namespace riemobs {

enum class Verdict { Pass, Fail, Inconclusive };
std::string_view to_string(Verdict v);

struct Witness {
  Vec point;
  Vec direction;
};

struct ConditionReport {
  std::string condition;
  Verdict verdict = Verdict::Inconclusive;
  /// a2: q estimate; a3-nullity: worst scaled ||II||; submersion: worst
  /// relative residual; a3-direct: most negative derivative found.
  double margin = 0.0;
  std::optional<Witness> witness;
  int samples_checked = 0;
  int inconclusive_samples = 0;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  /// Free-form qualifier, e.g. which SFF block carried the worst value.
  std::string detail;
};

struct SamplingOptions {
  std::uint64_t seed = 0;
  int samples = 512;
};

inline constexpr double kDefaultQMin = 1e-6;
inline constexpr double kNullityTol = 1e-8;
inline constexpr double kSubmersionTol = 1e-8;
inline constexpr double kMonotonicityTol = 1e-8;

struct DistributionBasis {
  Mat tangent;  // n x (n-p), orthonormal, spans ker dh
  Mat orth;     // n x p, P^{-1} dh^T
};

DistributionBasis distributions(const MetricField& p, const SmoothMap& h, const Vec& x);

/// Largest generalised eigenvalue of V^T L_f P V against V^T P V, V spanning
/// ker dh(x), with its eigenvector mapped back to R^n. Returns -inf with an
/// empty vector when p = n.
std::pair<double, Vec> a2_kernel_eigen(const SystemModel& model, const MetricField& p, const Vec& x);

ConditionReport check_a2(const SystemModel& model, const MetricField& p, const SamplingOptions& opts = {},
                         double q_min = kDefaultQMin);

/// Smallest rho such that L_f P - rho dh^T dh + q P <= 0 at x, by bisection.
/// Returns +inf if no rho up to 1e12 works.
double a2_rho_certificate(const SystemModel& model, const MetricField& p, const Vec& x, double q);

struct SffBlocks {
  std::vector<Mat> tt;     // V^T II V
  std::vector<Mat> oo;     // dh P^-1 II P^-1 dh^T
  std::vector<Mat> mixed;  // W^T II V
  Mat tangent;
  Mat orth;

  double max_norm(const std::vector<Mat>& blocks) const;
};

SffBlocks sff_blocks(const MetricField& p, const MetricField& q, const SmoothMap& h, const Vec& x);

ConditionReport check_a3_nullity(const SystemModel& model, const MetricField& p, const MetricField& q,
                                 const SamplingOptions& opts = {}, double tol = kNullityTol);

/// Relative residual ||(dh P^-1 dh^T)^-1 - Q(h)|| / ||Q(h)|| at x.
double submersion_residual(const MetricField& p, const MetricField& q, const SmoothMap& h, const Vec& x);

ConditionReport check_submersion(const MetricField& p, const MetricField& q, const SmoothMap& h,
                                 const Region& region, const SamplingOptions& opts = {},
                                 double tol = kSubmersionTol);

struct MonotonicityOptions {
  std::uint64_t seed = 0;
  int trials = 200;
  /// Grid points per geodesic at which (s3, s) pairs are evaluated.
  int grid = 17;
  /// Geodesic half-length, relative to the smallest box side.
  double reach = 0.1;
  double tol = kMonotonicityTol;
};

/// Monte-Carlo falsification of geodesic monotonicity. Half the trials join
/// random nearby pairs, the other half run along an output-kernel direction
/// through a sample point. Trials whose boundary value problem fails are
/// counted as inconclusive.
ConditionReport check_geodesic_monotonicity_direct(const SystemModel& model, const MetricField& p,
                                                   const GapFunction& gap,
                                                   const MonotonicityOptions& opts = {});

/// Worst monotonicity derivative along one geodesic; negative values beyond
/// the tolerance falsify. Sets `where` to the offending sample.
double monotonicity_margin(const Geodesic& g, const SmoothMap& h, const GapFunction& gap, int grid,
                           std::optional<Witness>* where = nullptr);

}  // namespace riemobs
