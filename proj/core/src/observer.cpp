#include "riemobs/observer.hpp"

#include <cmath>

namespace riemobs {

std::string_view to_string(DistanceMethod m) {
  switch (m) {
    case DistanceMethod::Geodesic: return "geodesic";
    case DistanceMethod::ConstantMetric: return "constant-metric";
    case DistanceMethod::EuclideanBound: return "euclidean-bound";
  }
  return "geodesic";
}

ObserverConfig ObserverConfig::with_constant_gain(double k) {
  ObserverConfig cfg;
  cfg.gain = [k](const Vec&) { return k; };
  return cfg;
}

void ObserverConfig::validate() const {
  if (!gain) throw Error(ErrorCode::ConfigError, "observer gain is not set");
  if (!(dt > 0.0)) throw Error(ErrorCode::ConfigError, "dt must be positive");
  if (!(horizon > 0.0)) throw Error(ErrorCode::ConfigError, "horizon must be positive");
  if (sample_every < 1) throw Error(ErrorCode::ConfigError, "sample_every must be at least 1");
  if (method == DistanceMethod::EuclideanBound && !(lambda_min > 0.0 && lambda_max >= lambda_min)) {
    throw Error(ErrorCode::ConfigError, "euclidean-bound distance needs metric eigenvalue bounds");
  }
}

Vec observer_field(const SystemModel& model, const MetricField& p, const GapFunction& gap,
                   const ObserverConfig& cfg, const Vec& xhat, const Vec& y) {
  const double k = cfg.gain(xhat);
  if (!(k > 0.0)) throw Error(ErrorCode::PreconditionViolation, "k_E must be positive", xhat);
  const Vec yhat = model.h.eval(xhat);
  const Vec grad = gap.grad1(yhat, y);
  Vec out = model.f.eval(xhat);
  if (grad.squaredNorm() == 0.0) return out;
  return out - k * (riemannian_gradient(p, model.h, xhat) * grad);
}

std::pair<double, double> metric_eigen_bounds(const MetricField& p, const Region& region, int samples,
                                              std::uint64_t seed) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const Vec& x : region.sample(seed, samples)) {
    Eigen::SelfAdjointEigenSolver<Mat> es(p.eval(x), Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues().minCoeff());
    hi = std::max(hi, es.eigenvalues().maxCoeff());
  }
  return {lo, hi};
}

DistanceValue observer_distance(const MetricField& p, const ObserverConfig& cfg, const Vec& xhat,
                                const Vec& x, std::optional<Vec>* warm) {
  DistanceValue d;
  switch (cfg.method) {
    case DistanceMethod::ConstantMetric: {
      d.value = constant_metric_distance(p.eval(x), xhat, x);
      d.lo = d.hi = d.value;
      return d;
    }
    case DistanceMethod::EuclideanBound: {
      const double e = (xhat - x).norm();
      d.lo = std::sqrt(cfg.lambda_min) * e;
      d.hi = std::sqrt(cfg.lambda_max) * e;
      d.value = 0.5 * (d.lo + d.hi);
      return d;
    }
    case DistanceMethod::Geodesic: {
      if ((xhat - x).norm() == 0.0) {
        d.value = d.lo = d.hi = 0.0;
        return d;
      }
      try {
        std::optional<Vec> start;
        if (warm != nullptr && *warm) start = **warm;
        const BvpResult r = geodesic_bvp(p, xhat, x, {}, start);
        d.value = d.lo = d.hi = r.distance;
        if (warm != nullptr) *warm = r.curve.initial_velocity();
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoConvergence && e.code() != ErrorCode::LeftRegion &&
            e.code() != ErrorCode::StepFailure) {
          throw;
        }
        if (warm != nullptr) warm->reset();
      }
      return d;
    }
  }
  return d;
}

ObserverRun simulate(const SystemModel& model, const MetricField& p, const GapFunction& gap,
                     const ObserverConfig& cfg, const Vec& x0, const Vec& xhat0) {
  cfg.validate();
  if (x0.size() != model.n() || xhat0.size() != model.n()) {
    throw Error(ErrorCode::DimensionMismatch, "initial states have wrong dimension");
  }
  if (!model.region.contains(x0)) throw Error(ErrorCode::LeftRegion, "plant initial state outside region", x0);
  if (!model.region.contains(xhat0)) {
    throw Error(ErrorCode::LeftRegion, "observer initial state outside region", xhat0);
  }

  ObserverRun run;
  run.method = cfg.method;
  std::optional<Vec> warm;
  Vec x = x0, xh = xhat0;

  auto record = [&](double t, bool valid) {
    const DistanceValue d = observer_distance(p, cfg, xh, x, &warm);
    if (std::isnan(d.value)) ++run.missing_distances;
    run.times.push_back(t);
    run.x.push_back(x);
    run.xhat.push_back(xh);
    run.y.push_back(model.h.eval(x));
    run.dist.push_back(d.value);
    run.dist_lo.push_back(d.lo);
    run.dist_hi.push_back(d.hi);
    run.valid.push_back(valid);
  };

  record(0.0, true);
  if (!std::isnan(run.dist[0]) && run.dist[0] >= cfg.basin) {
    throw Error(ErrorCode::PreconditionViolation, "initial distance is not inside the basin", xhat0);
  }

  const int steps = static_cast<int>(std::llround(cfg.horizon / cfg.dt));
  const double h = cfg.dt;
  auto rhs = [&](const Vec& xs, const Vec& xhs, Vec& dx, Vec& dxh) {
    dx = model.f.eval(xs);
    dxh = observer_field(model, p, gap, cfg, xhs, model.h.eval(xs));
  };
  Vec k1, k2, k3, k4, l1, l2, l3, l4;
  for (int k = 1; k <= steps; ++k) {
    try {
      rhs(x, xh, k1, l1);
      rhs(x + 0.5 * h * k1, xh + 0.5 * h * l1, k2, l2);
      rhs(x + 0.5 * h * k2, xh + 0.5 * h * l2, k3, l3);
      rhs(x + h * k3, xh + h * l3, k4, l4);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularMetric) throw;
      run.truncated = true;
      run.truncation_reason = "metric singular at observer state";
      break;
    }
    x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    xh += h / 6.0 * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
    const double t = k * h;
    const bool plant_ok = model.region.contains(x);
    const bool observer_ok = model.region.contains(xh);
    if (!plant_ok || !observer_ok) {
      run.truncated = true;
      run.truncation_reason = plant_ok ? "observer left region" : "plant left region";
      record(t, false);
      break;
    }
    if (k % cfg.sample_every == 0 || k == steps) record(t, true);
  }
  return run;
}

CertificateReport contraction_certificate(const ObserverRun& run, double rate, double slack) {
  CertificateReport rep;
  rep.rate = rate;
  const bool bounds = run.method == DistanceMethod::EuclideanBound;
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < run.size(); ++k) {
    if (!run.valid[k]) break;
    if (!std::isnan(run.dist[k])) idx.push_back(k);
  }
  rep.samples = static_cast<int>(idx.size());
  if (idx.size() < 10) {
    throw Error(ErrorCode::InsufficientSamples,
                "contraction certificate needs at least 10 distance samples, got " + std::to_string(idx.size()));
  }
  bool violated = false;
  for (std::size_t j = 0; j + 1 < idx.size(); ++j) {
    const std::size_t a = idx[j], b = idx[j + 1];
    const double dt = run.times[b] - run.times[a];
    const double next = bounds ? run.dist_hi[b] : run.dist[b];
    const double prev = bounds ? run.dist_lo[a] : run.dist[a];
    if (next <= kDistanceFloor) continue;
    const double envelope = prev * std::exp(-rate * dt);
    const double ratio = envelope > 0.0 ? next / envelope : std::numeric_limits<double>::infinity();
    rep.worst_ratio = std::max(rep.worst_ratio, ratio);
    if (ratio > 1.0 + slack && !violated) {
      violated = true;
      rep.first_violation_time = run.times[b];
    }
  }
  if (!violated) {
    rep.verdict = Verdict::Pass;
  } else {
    rep.verdict = bounds ? Verdict::Inconclusive : Verdict::Fail;
  }
  return rep;
}

double fitted_decay_rate(const ObserverRun& run) {
  double st = 0, sl = 0, stt = 0, stl = 0;
  int n = 0;
  for (std::size_t k = 0; k < run.size(); ++k) {
    if (!run.valid[k]) break;
    const double d = run.dist[k];
    if (std::isnan(d) || d <= kDistanceFloor) continue;
    const double t = run.times[k], l = std::log(d);
    st += t;
    sl += l;
    stt += t * t;
    stl += t * l;
    ++n;
  }
  if (n < 2) return 0.0;
  const double denom = n * stt - st * st;
  if (denom == 0.0) return 0.0;
  return -(n * stl - st * sl) / denom;
}

GainScan scan_gain(const SystemModel& model, const MetricField& p, const GapFunction& gap,
                   ObserverConfig cfg, const Vec& x0, const Vec& xhat0) {
  GainScan scan;
  for (int e = 0; e <= 10; ++e) {
    const double k = std::ldexp(1.0, e);
    cfg.gain = [k](const Vec&) { return k; };
    ObserverRun run = simulate(model, p, gap, cfg, x0, xhat0);
    GainScanEntry entry;
    entry.gain = k;
    entry.fitted_rate = fitted_decay_rate(run);
    try {
      const CertificateReport cert = contraction_certificate(run, cfg.rate);
      entry.verdict = cert.verdict;
      entry.worst_ratio = cert.worst_ratio;
    } catch (const Error& err) {
      if (err.code() != ErrorCode::InsufficientSamples) throw;
      entry.verdict = Verdict::Inconclusive;
    }
    scan.entries.push_back(entry);
    scan.run = std::move(run);
    if (entry.verdict == Verdict::Pass) {
      scan.chosen = k;
      break;
    }
  }
  return scan;
}

double gain_margin_probe(const SystemModel& model, const MetricField& p, const GapFunction& gap,
                         double gain, const Vec& x, const Vec& xhat, double scale) {
  if ((x - xhat).norm() == 0.0) return 0.0;
  const BvpResult r = geodesic_bvp(p, x, xhat);
  const Vec& vel = r.curve.samples.back().velocity;
  const Vec grad = gap.grad1(model.h.eval(xhat), model.h.eval(x));
  const Vec corr = scale * gain * (riemannian_gradient(p, model.h, xhat) * grad);
  return vel.dot(p.eval(xhat) * corr);
}

}  // namespace riemobs
