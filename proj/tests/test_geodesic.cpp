#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace riemobs;
using namespace riemobs::testing;

TEST(GeodesicIvp, StraightLinesForConstantMetric) {
  std::mt19937_64 rng(31);
  const MetricField p = MetricField::constant(random_spd(rng, 3));
  const Vec x0 = random_vec(rng, 3), v0 = random_vec(rng, 3);
  const Geodesic g = geodesic_ivp(p, x0, v0, 2.0, 0.1);
  for (const GeodesicSample& s : g.samples) {
    EXPECT_LE((s.point - (x0 + s.s * v0)).norm(), 1e-12);
    EXPECT_LE((s.velocity - v0).norm(), 1e-12);
  }
  EXPECT_NEAR(g.length, 2.0 * std::sqrt(v0.dot(p.eval(x0) * v0)), 1e-12);
}

TEST(GeodesicIvp, SpeedIsConserved) {
  std::mt19937_64 rng(32);
  const MetricField p = skew_metric();
  for (int k = 0; k < 10; ++k) {
    const Geodesic g = geodesic_ivp(p, random_vec(rng, 2), random_vec(rng, 2), 1.5, 0.05);
    EXPECT_LE(g.speed_drift, 1e-6);
    const double e0 = g.samples.front().velocity.dot(p.eval(g.start()) * g.samples.front().velocity);
    EXPECT_NEAR(g.energy, 1.5 * e0, 1e-5 * (1.0 + e0));
  }
}

TEST(GeodesicIvp, FourthOrderConvergence) {
  const MetricField p = skew_metric();
  Vec x0(2), v0(2);
  x0 << 0.2, -0.3;
  v0 << 0.8, 0.5;
  const Vec ref = geodesic_ivp_fixed(p, x0, v0, 1.0, 1024).end();
  const double e1 = (geodesic_ivp_fixed(p, x0, v0, 1.0, 16).end() - ref).norm();
  const double e2 = (geodesic_ivp_fixed(p, x0, v0, 1.0, 32).end() - ref).norm();
  EXPECT_GE(std::log2(e1 / e2), 3.5);
}

TEST(GeodesicIvp, LeavingTheDomainIsReported) {
  GeodesicOptions opts;
  opts.domain = [](const Vec& x) { return x.norm() < 1.0; };
  Vec x0 = Vec::Zero(2), v0(2);
  v0 << 3.0, 0.0;
  try {
    geodesic_ivp(MetricField::constant(Mat::Identity(2, 2)), x0, v0, 1.0, 0.05, opts);
    FAIL() << "expected LeftRegion";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LeftRegion);
  }
}

TEST(GeodesicIvp, ChartIndependentOnEx8Metric) {
  // A geodesic of the product metric, mapped into the (y, xi) chart, is a
  // geodesic of the pulled-back metric there.
  const BenchmarkSpec osc = harmonic_oscillator(0.5);
  const Ex8Parameters prm = tune_ex8_parameters(0.5);
  const MetricField& p = osc.metric("ex8-closed").p;
  const SmoothMap to_x = ex8_inverse_chart(prm);
  const MetricField p_chart = pullback_metric(p, to_x);
  Vec x0(3), v0(3);
  x0 << 0.8, 0.2, 1.1;
  v0 << 0.3, -0.2, 0.1;
  // xi = chart^-1(x) by Newton on the inverse chart
  Vec u = x0;
  for (int it = 0; it < 50; ++it) u -= to_x.jacobian(u).lu().solve(to_x.eval(u) - x0);
  ASSERT_LE((to_x.eval(u) - x0).norm(), 1e-12);
  const Vec w0 = to_x.jacobian(u).lu().solve(v0);
  const Geodesic gx = geodesic_ivp(p, x0, v0, 0.5, 0.01);
  const Geodesic gu = geodesic_ivp(p_chart, u, w0, 0.5, 0.01);
  EXPECT_LE((to_x.eval(gu.end()) - gx.end()).norm(), 1e-7);
  EXPECT_NEAR(gx.length, gu.length, 1e-9);
}

TEST(GeodesicBvp, ConstantMetricDistance) {
  std::mt19937_64 rng(33);
  for (int k = 0; k < 20; ++k) {
    const Mat m = random_spd(rng, 3);
    const Vec x1 = random_vec(rng, 3), x2 = random_vec(rng, 3);
    const BvpResult r = geodesic_bvp(MetricField::constant(m), x1, x2);
    EXPECT_NEAR(r.distance, constant_metric_distance(m, x1, x2), 1e-10);
    EXPECT_LE((r.curve.end() - x2).norm(), 1e-8);
  }
}

TEST(GeodesicBvp, SymmetricAndBoundedByChord) {
  std::mt19937_64 rng(34);
  const MetricField p = warped_plane(0.6);
  for (int k = 0; k < 20; ++k) {
    const Vec x1 = random_vec(rng, 2), x2 = random_vec(rng, 2);
    const double d12 = geodesic_bvp_distance(p, x1, x2);
    const double d21 = geodesic_bvp_distance(p, x2, x1);
    EXPECT_NEAR(d12, d21, 1e-8 * (1.0 + d12));
    // P >= I, so the Euclidean distance is a lower bound
    EXPECT_GE(d12, (x1 - x2).norm() - 1e-12);
    // and the straight chord is an admissible curve
    const Vec dx = x2 - x1;
    double chord = 0.0;
    const int steps = 2000;
    for (int i = 0; i < steps; ++i) {
      const Vec mid = x1 + (i + 0.5) / steps * dx;
      chord += std::sqrt(dx.dot(p.eval(mid) * dx)) / steps;
    }
    EXPECT_LE(d12, chord + 1e-9);
  }
}

TEST(GeodesicBvp, ZeroSeparation) {
  Vec x(2);
  x << 0.3, 0.4;
  EXPECT_EQ(geodesic_bvp_distance(skew_metric(), x, x), 0.0);
}

TEST(GeodesicBvp, AgreesWithGraphShortestPath) {
  const MetricField p = warped_plane(2.0);
  Vec x1(2), x2(2);
  x1 << -0.8, -0.6;
  x2 << 0.7, 0.8;
  const double d = geodesic_bvp_distance(p, x1, x2);
  const double graph = dijkstra_distance(p, x1, x2, 0.02, 6);
  // the graph path is an admissible curve, so it can only be longer
  EXPECT_GE(graph, d - 1e-9);
  EXPECT_LE(std::abs(graph - d) / d, 2e-3);
  // and the geodesic is genuinely shorter than the Euclidean chord's length
  const Vec dx = x2 - x1;
  double chord = 0.0;
  for (int i = 0; i < 1000; ++i) chord += std::sqrt(dx.dot(p.eval(x1 + (i + 0.5) / 1000.0 * dx) * dx)) / 1000.0;
  EXPECT_LT(d, chord - 1e-3);
}
