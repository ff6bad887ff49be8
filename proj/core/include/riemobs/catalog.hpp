#pragma once

// Worked systems with their metrics and expected verdicts.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "riemobs/conditions.hpp"
#include "riemobs/gap.hpp"
#include "riemobs/metric_construction.hpp"
#include "riemobs/polynomial.hpp"

namespace riemobs {

struct NamedMetric {
  std::string name;
  MetricField p;
  /// Detectability threshold used for this metric's a2 check.
  double q_min = kDefaultQMin;
  std::string note;
};

struct ExpectedVerdict {
  std::string metric;
  std::string condition;  // a2 | a3-nullity | a3-direct | submersion
  Verdict verdict = Verdict::Pass;
};

struct SimulationDefaults {
  Vec x0;
  Vec xhat0;
  double dt = 0.01;
  double horizon = 10.0;
  int sample_every = 10;
  double basin = std::numeric_limits<double>::infinity();
  /// Contraction rate the certificate is checked at.
  double rate = 0.0;
};

struct BenchmarkSpec {
  std::string name;
  SystemModel model;
  MetricField q;  // output metric
  GapFunction gap;
  std::vector<NamedMetric> metrics;
  std::vector<ExpectedVerdict> expected;
  std::map<std::string, double> params;
  SimulationDefaults sim;
  std::string citation;

  const NamedMetric& metric(const std::string& name) const;
  std::optional<Verdict> expectation(const std::string& metric, const std::string& condition) const;
};

// ---- linear-quadratic family ------------------------------------------

/// f = A x, h = H x, constant P and Q on the box [-2, 2]^n. Expected
/// verdicts: a3 pass always, a2 pass iff the kernel-restricted Lyapunov
/// inequality holds at the default threshold.
BenchmarkSpec linear_quadratic(const Mat& a, const Mat& h, const Mat& p, const Mat& q);

/// Double integrator y'' = 0 with P solving (A + q/2)^T P + P (A + q/2) = H^T H,
/// so that the kernel-restricted detectability margin is exactly q.
BenchmarkSpec linear_default(double q = 1.0);

/// P solving (A + q/2)^T P + P (A + q/2) = sigma H^T H.
Mat detectability_metric(const Mat& a, const Mat& h, double q, double sigma = 1.0);

// ---- harmonic oscillator ------------------------------------------------

/// {eps < zb y^2 + za^2 < 1/eps, eps < zb < 1/eps} in (y, za, zb).
Region oscillator_region(double epsilon);
SmoothMap oscillator_drift();

/// M^T W M with the 4x3 sandwich M(y, za, zb).
MetricField sandwich_metric(const Mat& weight);
/// Delta P0 Delta with P0 the Lyapunov solution of the 4-chain under output
/// injection K = (4, 6, 4, 1) and Delta = diag(1, 1/L, 1/L^2, 1/L^3).
Mat sandwich_high_gain_weight(double gain_scale = 12.0);

struct Ex8Ingredients {
  SmoothMap h;
  OrthComplementMap ortho;
  MetricField q;
};
Ex8Ingredients ex8_ingredients(const Ex8Parameters& prm);
/// Hand-coded c e1 e1^T + M^T diag(1, 1 + a (za - y)^2) M.
MetricField ex8_closed_form_metric(const Ex8Parameters& prm);
/// (y, xi_a, xi_b) -> (y, za, zb), the inverse of (h, h_perp).
SmoothMap ex8_inverse_chart(const Ex8Parameters& prm);
/// Closed-form ex8 observer right-hand side with correction k/c (1, 1, -yh - ab(zah + yh)) (yh - y).
Vec ex8_explicit_observer(const Ex8Parameters& prm, double gain, const Vec& xhat, double y);

struct OscillatorOptions {
  double c = 1.0;
  /// Weight for the "sandwich" metric; defaults to sandwich_high_gain_weight().
  std::optional<Mat> sandwich_weight;
};
BenchmarkSpec harmonic_oscillator(double epsilon, const OscillatorOptions& opts = {});

// ---- planar family ------------------------------------------------------

/// Polynomials in (y, z). b may only depend on y; a must be positive.
struct PlanarSpec {
  Polynomial f_y;
  Polynomial f_z;
  Polynomial a;
  Polynomial b;
};

/// h_perp(y, z) = int_0^y b + int_0^z a(y, s) ds, exactly for polynomials.
SmoothMap planar_h_perp(const PlanarSpec& s);
/// Scans constant b on a grid in [-2, 2] for f_y = z, f_z = -z - y, a = 1,
/// keeping the metric condition number <= 10 and maximising the margin.
double planar_tune_b();
BenchmarkSpec planar_family(const PlanarSpec& s, const std::string& name = "planar");
BenchmarkSpec planar_default();

// ---- circle output -------------------------------------------------------

/// x1 [k_b dk_a/dx2 - k_a dk_b/dx2] - x2 [k_b dk_a/dx1 - k_a dk_b/dx1].
double circle_rank_lhs(const SmoothMap& k, const Vec& x);
/// h = x1^2 + x2^2, h_perp = k / |k|, Q and R constant identity unless given.
BenchmarkSpec circle_output(const SmoothMap& k, const std::optional<MetricField>& r = std::nullopt);
BenchmarkSpec circle_default();

// ---- lookup ---------------------------------------------------------------

std::vector<std::string> benchmark_names();
/// Builds `linear`, `oscillator`, `planar` or `circle` with default
/// parameters; `epsilon` applies to the oscillator.
BenchmarkSpec make_benchmark(const std::string& name, double epsilon = 0.5);

}  // namespace riemobs
