// Acceptance runner. Each criterion prints its measurements as indented
// lines and then exactly one line "criterion N: PASS|FAIL ...".
//
//   riemobs_acceptance                 all criteria
//   riemobs_acceptance --criterion 4   one criterion; exit status 1 on FAIL

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "support.hpp"

using namespace riemobs;
using namespace riemobs::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string summary;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void note(const std::string& line) { std::cout << "  " << line << "\n" << std::flush; }

Mat random_weight(std::mt19937_64& rng, int n) {
  Mat w = random_spd(rng, n, 0.1);
  return w / w.trace() * n;
}

// ---- 1: linear family --------------------------------------------------------

Outcome linear_family() {
  std::mt19937_64 rng(1);
  std::vector<BenchmarkSpec> family = {linear_default(1.0)};
  for (const auto& [n, p] : std::vector<std::pair<int, int>>{{3, 1}, {4, 2}}) {
    Mat a(n, n), h(p, n);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = g(rng);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < n; ++j) h(i, j) = g(rng);
    family.push_back(linear_quadratic(a, h, random_spd(rng, n), random_spd(rng, p)));
  }
  double worst_sff = 0.0, worst_gain = 0.0;
  int samples = 0;
  for (const BenchmarkSpec& b : family) {
    const MetricField& p = b.metrics.front().p;
    const ConditionReport r = check_a3_nullity(b.model, p, b.q, {0, 512});
    worst_sff = std::max(worst_sff, r.margin);
    samples += r.samples_checked;
    const int n = b.model.n();
    const Mat a = b.model.f.jacobian(Vec::Zero(n)), h = b.model.h.jacobian(Vec::Zero(n));
    const Mat pv = p.eval(Vec::Zero(n)), qv = b.q.eval(Vec::Zero(b.model.p()));
    for (double k : {0.5, 2.0}) {
      const Mat l = 2.0 * k * pv.inverse() * h.transpose() * qv;
      for (int t = 0; t < 20; ++t) {
        const Vec xh = random_vec(rng, n), y = random_vec(rng, b.model.p());
        const Vec expect = a * xh - l * (h * xh - y);
        const Vec got = observer_field(b.model, p, b.gap, ObserverConfig::with_constant_gain(k), xh, y);
        worst_gain = std::max(worst_gain, (got - expect).norm() / (1.0 + expect.norm()));
      }
    }
    note(b.name + " n=" + std::to_string(n) + ": nullity margin " + fmt("%.3g", r.margin) + " over " +
         std::to_string(r.samples_checked) + " points");
  }
  note("observer correction vs A xh - L (H xh - y), L = 2 k P^-1 H^T Q: worst relative gap " + fmt("%.3g", worst_gain));
  const bool pass = worst_sff <= 1e-12 && worst_gain <= 1e-12;
  return {pass, "nullity margin " + fmt("%.3g", worst_sff) + " at " + std::to_string(samples) +
                    " points; Luenberger form gap " + fmt("%.3g", worst_gain)};
}

// ---- 2: sandwich metric on the oscillator ----------------------------------

Outcome sandwich_weights() {
  const BenchmarkSpec osc = harmonic_oscillator(0.5);
  std::mt19937_64 rng(2);
  std::vector<std::pair<std::string, Mat>> weights = {{"identity", Mat::Identity(4, 4)}};
  for (int i = 0; i < 10; ++i) weights.emplace_back("random " + std::to_string(i + 1), random_weight(rng, 4));
  int a2_pass = 0, tt_fail = 0;
  double best_q = -std::numeric_limits<double>::infinity();
  for (const auto& [name, w] : weights) {
    const MetricField p = sandwich_metric(w);
    const ConditionReport a2 = check_a2(osc.model, p);
    const ConditionReport nul = check_a3_nullity(osc.model, p, osc.q);
    const bool a2_ok = a2.verdict == Verdict::Pass && a2.margin > 0.0;
    const bool tt_ok = nul.verdict == Verdict::Fail && nul.witness &&
                       nul.detail.find("tangent-tangent") != std::string::npos;
    a2_pass += a2_ok;
    tt_fail += tt_ok;
    best_q = std::max(best_q, a2.margin);
    note(name + ": a2 " + std::string(to_string(a2.verdict)) + " q_est " + fmt("%.4g", a2.margin) + "; nullity " +
         std::string(to_string(nul.verdict)) + " (" + nul.detail + ")");
  }
  const ConditionReport designed = check_a2(osc.model, osc.metric("sandwich").p);
  note("for reference, the high-gain designed weight: a2 " + std::string(to_string(designed.verdict)) + " q_est " +
       fmt("%.4g", designed.margin));
  const int total = static_cast<int>(weights.size());
  return {a2_pass == total && tt_fail == total,
          "a2 passes for " + std::to_string(a2_pass) + "/" + std::to_string(total) + " weights (best q_est " +
              fmt("%.3g", best_q) + "); nullity fails with a tangent-tangent witness for " + std::to_string(tt_fail) +
              "/" + std::to_string(total)};
}

// ---- 3: ex8 pipeline -----------------------------------------------------------

Outcome ex8_pipeline() {
  const Ex8Parameters prm = tune_ex8_parameters(0.5);
  const BenchmarkSpec osc = harmonic_oscillator(0.5);
  note("tuned a = 2^-" + std::to_string(prm.a_exponent) + ", b = " + fmt("%g", prm.b) + ", c = " + fmt("%g", prm.c) +
       ", q = " + fmt("%.5g", prm.q));
  const Ex8Inequalities ineq = ex8_inequalities(prm.a, prm.b, prm.q, 0.5);
  note("constant inequalities: slacks " + fmt("%.3g", ineq.gain_slack) + ", " + fmt("%.3g", ineq.bound_slack) + ", " +
       fmt("%.3g", ineq.cross_slack));

  const Region omega = oscillator_region(0.5);
  int side = 20, inside = 0;
  double worst_slack = std::numeric_limits<double>::infinity();
  for (;; side += 4) {
    inside = 0;
    worst_slack = std::numeric_limits<double>::infinity();
    for (int i = 0; i < side; ++i)
      for (int j = 0; j < side; ++j)
        for (int k = 0; k < side; ++k) {
          Vec x(3);
          const int idx[3] = {i, j, k};
          for (int c = 0; c < 3; ++c) x(c) = omega.lo(c) + (omega.hi(c) - omega.lo(c)) * (idx[c] + 0.5) / side;
          if (!omega.contains(x)) continue;
          ++inside;
          const auto [s1, s2] = ex8_pointwise_slacks(prm.a, prm.b, prm.q, x);
          worst_slack = std::min({worst_slack, s1, s2});
        }
    if (inside >= 10000) break;
  }
  note("pointwise sufficient inequalities on " + std::to_string(inside) + " grid points: worst slack " +
       fmt("%.4g", worst_slack));

  const MetricField& built = osc.metric("ex8").p;
  const MetricField& closed = osc.metric("ex8-closed").p;
  double closed_gap = 0.0;
  for (const Vec& x : omega.sample(3, 100))
    closed_gap = std::max(closed_gap, (built.eval(x) - closed.eval(x)).norm() / closed.eval(x).norm());
  note("assembled vs closed form at 100 points: " + fmt("%.3g", closed_gap));

  const ConditionReport a2 = check_a2(osc.model, built, {}, prm.q);
  const ConditionReport nul = check_a3_nullity(osc.model, built, osc.q);
  note("a2 " + std::string(to_string(a2.verdict)) + " q_est " + fmt("%.4g", a2.margin) + " (threshold q), nullity " +
       std::string(to_string(nul.verdict)) + " margin " + fmt("%.3g", nul.margin));

  const SmoothMap to_x = ex8_inverse_chart(prm);
  const MetricField chart = pullback_metric(built, to_x);
  const MetricField diag = ex8_chart_metric(prm.a, prm.c);
  double chart_gap = 0.0;
  const double ab = prm.a * prm.b;
  for (const Vec& x : omega.sample(4, 100)) {
    Vec u(3);
    u << x(0), x(1) - x(0), x(2) + 0.5 * x(0) * x(0) + ab * x(0) * x(1);
    chart_gap = std::max(chart_gap, (to_x.eval(u) - x).norm());
    chart_gap = std::max(chart_gap, (chart.eval(u) - diag.eval(u)).norm());
  }
  note("(y, xi) chart vs diag(c, 1, 1 + a xi_a^2) at 100 points: " + fmt("%.3g", chart_gap));

  Vec u0(3);
  u0 << 0.7, 0.0, 1.2;
  const double s = scalar_curvature(chart, u0);
  const double r = curvature_component(chart, u0, 1, 2, 1, 2);
  const double curv_err = std::abs(s / (-2.0 * prm.a) - 1.0);
  note("at xi_a = 0: scalar curvature " + fmt("%.6g", s) + " vs -2a = " + fmt("%.6g", -2.0 * prm.a) +
       "; R^a_bab = " + fmt("%.6g", r));

  const bool pass = prm.b == 36.0 && ineq.satisfied() && worst_slack > 0.0 && inside >= 10000 &&
                    closed_gap <= 1e-12 && a2.verdict == Verdict::Pass && nul.verdict == Verdict::Pass &&
                    chart_gap <= 1e-10 && curv_err <= 1e-6 && s != 0.0;
  return {pass, "b = 36, inequalities hold on " + std::to_string(inside) + " points, closed-form gap " +
                    fmt("%.2g", closed_gap) + ", chart gap " + fmt("%.2g", chart_gap) + ", curvature " +
                    fmt("%.4g", s) + " = -2a"};
}

// ---- 4: contraction --------------------------------------------------------------

Outcome contraction() {
  // linear: fitted rate vs the slowest eigenvalue of A - 2 k P^-1 H^T Q H
  const BenchmarkSpec lin = linear_default(1.0);
  ObserverConfig lcfg = ObserverConfig::with_constant_gain(1.0);
  lcfg.dt = lin.sim.dt;
  lcfg.horizon = lin.sim.horizon;
  lcfg.sample_every = lin.sim.sample_every;
  const ObserverRun lrun = simulate(lin.model, lin.metrics.front().p, lin.gap, lcfg, lin.sim.x0, lin.sim.xhat0);
  const Mat a = lin.model.f.jacobian(Vec::Zero(2)), h = lin.model.h.jacobian(Vec::Zero(2));
  const Mat acl = a - 2.0 * lin.metrics.front().p.eval(Vec::Zero(2)).inverse() * h.transpose() *
                          lin.q.eval(Vec::Zero(1)) * h;
  const double slow = -Eigen::EigenSolver<Mat>(acl).eigenvalues().real().maxCoeff();
  const double fitted = fitted_decay_rate(lrun);
  const double rel = std::abs(fitted / slow - 1.0);
  note("linear: fitted decay " + fmt("%.5f", fitted) + " vs closed form " + fmt("%.5f", slow) + " (" +
       fmt("%.2f", 100.0 * rel) + "%)");

  // ex8: 20 pairs, scanned constant gain, exact geodesic distances
  const BenchmarkSpec osc = harmonic_oscillator(0.5);
  const Ex8Parameters prm = tune_ex8_parameters(0.5);
  const MetricField& p = osc.metric("ex8-closed").p;
  const double basin = 0.5;
  const Region inner = oscillator_region(0.6);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<std::pair<Vec, Vec>> pairs;
  for (const Vec& x0 : inner.sample(7, 400)) {
    if (pairs.size() == 20) break;
    Vec dx(3);
    for (int i = 0; i < 3; ++i) dx(i) = g(rng);
    const Vec xh = x0 + 0.2 * dx / dx.norm();
    if (!inner.contains(xh)) continue;
    if (geodesic_bvp_distance(p, xh, x0) >= basin) continue;
    pairs.emplace_back(x0, xh);
  }
  note("ex8: " + std::to_string(pairs.size()) + " initial pairs in the 0.6 sublevel region, rate q/4 = " +
       fmt("%.4g", prm.q / 4.0));
  std::optional<double> chosen;
  for (int e = 0; e <= 10 && !chosen; ++e) {
    const double k = std::ldexp(1.0, e);
    ObserverConfig cfg = ObserverConfig::with_constant_gain(k);
    cfg.dt = osc.sim.dt;
    cfg.horizon = osc.sim.horizon;
    cfg.sample_every = osc.sim.sample_every;
    cfg.basin = basin;
    cfg.rate = prm.q / 4.0;
    int passed = 0, exited = 0;
    double worst = 0.0;
    for (const auto& [x0, xh] : pairs) {
      const ObserverRun run = simulate(osc.model, p, osc.gap, cfg, x0, xh);
      exited += run.truncated;
      try {
        const CertificateReport c = contraction_certificate(run, cfg.rate);
        passed += c.verdict == Verdict::Pass;
        worst = std::max(worst, c.worst_ratio);
      } catch (const Error&) {
        // too few valid samples counts as not passing
      }
    }
    note("k_E = " + fmt("%g", k) + ": " + std::to_string(passed) + "/" + std::to_string(pairs.size()) +
         " runs inside the envelope, " + std::to_string(exited) + " truncated, worst ratio " + fmt("%.6f", worst));
    if (passed == static_cast<int>(pairs.size())) chosen = k;
  }
  const bool pass = pairs.size() == 20 && chosen.has_value() && rel <= 0.05;
  return {pass, "ex8 envelope holds for 20/20 runs at k_E = " + (chosen ? fmt("%g", *chosen) : std::string("none")) +
                    "; linear fitted rate within " + fmt("%.2f", 100.0 * rel) + "%"};
}

// ---- 5: P_mod ---------------------------------------------------------------------

struct PmodStats {
  double submersion = 0.0, angle = 0.0, shift = 0.0, idempotence = 0.0;
};

PmodStats pmod_stats(const BenchmarkSpec& b, const MetricField& p) {
  PmodStats s;
  const MetricField pm = p_mod(p, b.q, b.model.h);
  const MetricField pm2 = p_mod(pm, b.q, b.model.h);
  for (const Vec& x : b.model.region.sample(5, 512)) {
    s.submersion = std::max(s.submersion, submersion_residual(pm, b.q, b.model.h, x));
    s.angle = std::max(s.angle, max_principal_angle(distributions(p, b.model.h, x).orth,
                                                    distributions(pm, b.model.h, x).orth));
    const Mat v = pm.eval(x);
    s.idempotence = std::max(s.idempotence, (pm2.eval(x) - v).norm() / v.norm());
  }
  s.shift = std::abs(check_a2(b.model, pm).margin - check_a2(b.model, p).margin);
  return s;
}

Outcome pmod_properties() {
  const BenchmarkSpec osc = harmonic_oscillator(0.5);
  const BenchmarkSpec lin = linear_default(1.0);
  std::mt19937_64 rng(5);
  PmodStats worst;
  bool pass = true;
  auto run = [&](const std::string& name, const BenchmarkSpec& b, const MetricField& p) {
    const PmodStats s = pmod_stats(b, p);
    note(name + ": submersion " + fmt("%.2g", s.submersion) + ", angle " + fmt("%.2g", s.angle) + ", a2 shift " +
         fmt("%.2g", s.shift) + ", idempotence " + fmt("%.2g", s.idempotence));
    pass = pass && s.submersion <= 1e-8 && s.angle <= 1e-8 && s.shift <= 1e-6 && s.idempotence <= 1e-10;
    worst.submersion = std::max(worst.submersion, s.submersion);
    worst.angle = std::max(worst.angle, s.angle);
    worst.shift = std::max(worst.shift, s.shift);
    worst.idempotence = std::max(worst.idempotence, s.idempotence);
  };
  run("oscillator, sandwich identity weight", osc, osc.metric("sandwich-identity").p);
  run("oscillator, sandwich designed weight", osc, osc.metric("sandwich").p);
  run("oscillator, sandwich random weight", osc, sandwich_metric(random_weight(rng, 4)));
  for (int i = 0; i < 3; ++i) run("linear, random SPD " + std::to_string(i + 1), lin, MetricField::constant(random_spd(rng, 2)));
  return {pass, "worst submersion " + fmt("%.2g", worst.submersion) + ", angle " + fmt("%.2g", worst.angle) +
                    ", a2 shift " + fmt("%.2g", worst.shift) + ", idempotence " + fmt("%.2g", worst.idempotence)};
}

// ---- 6: geometry kernel -------------------------------------------------------------

Outcome geometry_kernel() {
  std::mt19937_64 rng(6);
  const BenchmarkSpec osc = harmonic_oscillator(0.5);

  double drift = 0.0;
  for (const Vec& x : osc.model.region.sample(6, 25)) {
    const Vec v = random_vec(rng, 3).normalized() * 0.3;
    drift = std::max(drift, geodesic_ivp(osc.metric("ex8").p, x, v, 1.0, 0.05).speed_drift);
    drift = std::max(drift, geodesic_ivp(osc.metric("sandwich-identity").p, x, v, 1.0, 0.05).speed_drift);
  }
  note("speed drift over 50 geodesics: " + fmt("%.3g", drift));

  const MetricField warped = warped_plane(2.0);
  double grid_gap = 0.0;
  const double pairs[3][4] = {{-0.8, -0.6, 0.7, 0.8}, {-0.9, 0.5, 0.9, 0.4}, {0.0, -0.9, 0.3, 0.9}};
  for (const auto& pr : pairs) {
    Vec x1(2), x2(2);
    x1 << pr[0], pr[1];
    x2 << pr[2], pr[3];
    const double d = geodesic_bvp_distance(warped, x1, x2);
    const double graph = dijkstra_distance(warped, x1, x2, 0.02, 16);
    grid_gap = std::max(grid_gap, std::abs(graph - d));
    note("BVP " + fmt("%.6f", d) + " vs grid " + fmt("%.6f", graph));
  }

  const SmoothMap hfun = SmoothMap::from_expression(2, 1, [](const auto& x) {
    using T = ScalarOf<decltype(x)>;
    using std::sin;
    VecX<T> out(1);
    out(0) = x(0) * x(0) + x(0) * x(1) + sin(x(1));
    return out;
  });
  const double hess = hessian_geodesic_error(skew_metric(), hfun, rng, 50);
  note("Hessian vs second derivative along 50 geodesics: " + fmt("%.3g", hess));

  const double tens = std::max(sff_tensoriality_error(osc, osc.metric("sandwich-identity").p, 60, 20),
                               sff_tensoriality_error(osc, osc.metric("ex8").p, 61, 20));
  note("second fundamental form under 20 chart changes per metric: " + fmt("%.3g", tens));

  double schur = 0.0;
  std::normal_distribution<double> gd(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const int d = 2 + t % 2;
    const Mat g = random_spd(rng, d);
    const Vec z = random_vec(rng, d);
    Mat kk = Mat::Zero(d, d);  // K_{mu i} = sum_eta C^mu_{eta i} z_eta
    for (int mu = 0; mu < d; ++mu)
      for (int i = 0; i < d; ++i)
        for (int eta = 0; eta < d; ++eta) kk(mu, i) += gd(rng) * z(eta);
    const double bb = 0.5 + std::abs(gd(rng)), aa = 0.5 + std::abs(gd(rng));
    const double cc = 0.9 * std::sqrt(aa * bb) * std::tanh(gd(rng));
    Mat p(2 * d, 2 * d);
    p.topLeftCorner(d, d) = aa * g - cc * (kk.transpose() * g + g * kk) + bb * kk.transpose() * g * kk;
    p.topRightCorner(d, d) = -cc * g + bb * kk.transpose() * g;
    p.bottomLeftCorner(d, d) = p.topRightCorner(d, d).transpose();
    p.bottomRightCorner(d, d) = bb * g;
    const Mat expect = (aa - cc * cc / bb) * g;
    schur = std::max(schur, (schur_py(p, d) - expect).norm() / (expect.norm() * (1.0 + kk.squaredNorm())));
  }
  note("Lagrangian Schur complement over 20 draws: " + fmt("%.3g", schur));

  const bool pass = drift <= 1e-6 && grid_gap <= 1e-3 && hess <= 1e-4 && tens <= 1e-6 && schur <= 1e-10;
  return {pass, "drift " + fmt("%.2g", drift) + ", grid gap " + fmt("%.2g", grid_gap) + ", Hessian " +
                    fmt("%.2g", hess) + ", tensoriality " + fmt("%.2g", tens) + ", Schur " + fmt("%.2g", schur)};
}

// ---- 7: direct monotonicity -----------------------------------------------------------

Outcome direct_monotonicity() {
  const BenchmarkSpec osc = harmonic_oscillator(0.5);
  MonotonicityOptions opts;
  opts.trials = 200;
  const ConditionReport ok = check_geodesic_monotonicity_direct(osc.model, osc.metric("ex8").p, osc.gap, opts);
  note("ex8: " + std::string(to_string(ok.verdict)) + ", most negative derivative " + fmt("%.3g", ok.margin) + ", " +
       std::to_string(ok.inconclusive_samples) + " inconclusive trials");
  const ConditionReport bad =
      check_geodesic_monotonicity_direct(osc.model, osc.metric("sandwich-identity").p, osc.gap, opts);
  note("sandwich, identity weight: " + std::string(to_string(bad.verdict)) + ", most negative derivative " +
       fmt("%.3g", bad.margin));
  if (bad.witness) {
    const Vec& w = bad.witness->point;
    note("  witness at (" + fmt("%.4f", w(0)) + ", " + fmt("%.4f", w(1)) + ", " + fmt("%.4f", w(2)) + ")");
  }
  for (double reach : {0.1, 0.3}) {
    MonotonicityOptions o = opts;
    o.reach = reach;
    const ConditionReport hg = check_geodesic_monotonicity_direct(osc.model, osc.metric("sandwich").p, osc.gap, o);
    note("sandwich, designed weight, reach " + fmt("%.1f", reach) + ": " + std::string(to_string(hg.verdict)) +
         ", most negative derivative " + fmt("%.3g", hg.margin));
  }
  const bool pass = ok.verdict != Verdict::Fail && bad.verdict == Verdict::Fail && bad.witness.has_value();
  return {pass, "ex8 not falsified in 200 trials (" + fmt("%.2g", ok.margin) +
                    "); sandwich metric falsified with derivative " + fmt("%.2g", bad.margin)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-7)")->check(CLI::Range(1, 7));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<Outcome()>> criteria = {linear_family,  sandwich_weights, ex8_pipeline,
                                                          contraction,    pmod_properties, geometry_kernel,
                                                          direct_monotonicity};
  bool all = true;
  for (int i = 1; i <= 7; ++i) {
    if (only != 0 && i != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "criterion " << i << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.summary << "  ("
              << fmt("%.1f", secs) << " s)\n"
              << std::flush;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
