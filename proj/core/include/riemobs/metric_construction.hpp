#pragma once

// Metrics built to satisfy the geodesic-monotonicity condition: the P_mod
// repair of an arbitrary metric, the product-metric pullback
// P = dh^T Q(h) dh + dh_perp^T R(h_perp) dh_perp, and the sufficient
// inequality used to tune such a metric for detectability.

#include <optional>
#include <string>

#include "riemobs/conditions.hpp"
#include "riemobs/metric_field.hpp"
#include "riemobs/region.hpp"

namespace riemobs {

/// P + dh^T [Q(h) - (dh P^-1 dh^T)^-1] dh, evaluated lazily.
MetricField p_mod(const MetricField& p, const MetricField& q, const SmoothMap& h);

/// P_yy - P_yz P_zz^-1 P_zy with the first `p_out` coordinates as the y block.
/// Throws SingularBlock when P_zz is not invertible.
Mat schur_py(const Mat& p, int p_out);

/// The complementary map h_perp into Xi = R^m together with the metric R on Xi.
struct OrthComplementMap {
  SmoothMap h_perp;
  MetricField r;
  /// Expected rank of dh_perp, n - p.
  int declared_rank = 0;
};

struct ConstructedMetric {
  MetricField metric;
  MetricField q;
  SmoothMap h;
  OrthComplementMap ortho;
};

/// Assembles the product metric. When `region` is given, rank conditions
/// are verified on `samples` points and RankViolation is thrown on failure.
ConstructedMetric build_product_metric(const MetricField& q, const OrthComplementMap& ortho,
                                       const SmoothMap& h, const Region* region = nullptr,
                                       int samples = 64, std::uint64_t seed = 0);

/// Checks rank(dh_perp) = n - p and rank([dh; dh_perp]) = n at x.
/// Throws RankViolation with the point attached.
void verify_product_ranks(const SmoothMap& h, const OrthComplementMap& ortho, const Vec& x);

struct SufficiencyValue {
  double lhs = 0.0;
  double rhs = 0.0;
  /// w^T R w, so a caller can form the admissible q margin -lhs / wRw.
  double w_r_w = 0.0;
};

/// lhs = w^T (sum_g dR/dxi_g g_g) w + 2 (dg[v])^T R w, rhs = -q w^T R w with
/// g = dh_perp f and w = dh_perp v. v must lie in ker dh.
SufficiencyValue a2_sufficiency_lhs(const SystemModel& model, const OrthComplementMap& ortho,
                                    const Vec& x, const Vec& v, double q);

struct Ex8Parameters {
  double a = 0.0;
  double b = 0.0;
  double c = 1.0;
  double q = 0.0;
  double epsilon = 0.0;
  /// Largest q for which the three constant inequalities hold at this a.
  double q_sup = 0.0;
  int a_exponent = 0;  // a = 2^-a_exponent
};

/// Values of the three constant inequalities, each expressed as
/// "slack > 0 means satisfied" (the first allows equality).
struct Ex8Inequalities {
  double gain_slack = 0.0;   // (2 - q) b - 4 (1/eps + 1)^2 >= 0
  double bound_slack = 0.0;  // 1 - 4ab/eps^2 - q > 0
  double cross_slack = 0.0;  // 4(..)(..) - 64 a^2 / eps^6 (..)^2 (..)^2 > 0
  bool satisfied() const { return gain_slack >= 0.0 && bound_slack > 0.0 && cross_slack > 0.0; }
};
Ex8Inequalities ex8_inequalities(double a, double b, double q, double epsilon);

/// Pointwise sufficient conditions at (y, z_alpha, z_beta) from which the
/// constant inequalities are derived; both slacks must be positive.
std::pair<double, double> ex8_pointwise_slacks(double a, double b, double q, const Vec& x);

/// b = 4 (1/eps + 1)^2, a scanned over 2^-k for k = 1..64, q bisected per a
/// and set to half the supremum. Throws NoFeasiblePoint.
Ex8Parameters tune_ex8_parameters(double epsilon, double c = 1.0);

/// Solves A^T X + X A = M for X (small dense, Kronecker form).
Mat solve_lyapunov(const Mat& a, const Mat& m);

}  // namespace riemobs
