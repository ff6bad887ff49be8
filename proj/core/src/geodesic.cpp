#include "riemobs/geodesic.hpp"

#include <cmath>
#include <limits>

namespace riemobs {

Vec geodesic_acceleration(const MetricField& p, const Vec& x, const Vec& v) {
  const Mat pv = p.eval(x);
  const auto l = cholesky_spd(pv);
  if (!l) throw Error(ErrorCode::LeftRegion, "metric lost positive definiteness along geodesic", x);
  const auto dp = p.derivatives(x);
  const Eigen::Index n = x.size();
  Vec rhs = Vec::Zero(n);
  for (Eigen::Index b = 0; b < n; ++b) rhs += v(b) * (dp[b] * v);
  for (Eigen::Index d = 0; d < n; ++d) rhs(d) -= 0.5 * v.dot(dp[d] * v);
  return -cholesky_solve(*l, rhs);
}

namespace {

void check_domain(const GeodesicOptions& opts, const Vec& x) {
  if (!x.allFinite()) throw Error(ErrorCode::LeftRegion, "geodesic diverged", x);
  if (opts.domain && !opts.domain(x)) throw Error(ErrorCode::LeftRegion, "geodesic left the region", x);
}

double speed_sq(const MetricField& p, const Vec& x, const Vec& v) { return v.dot(p.eval(x) * v); }

}  // namespace

Geodesic geodesic_ivp_fixed(const MetricField& p, const Vec& x0, const Vec& v0, double s_end,
                            int steps, const GeodesicOptions& opts) {
  if (steps < 1) throw Error(ErrorCode::PreconditionViolation, "geodesic needs at least one step");
  const double h = s_end / steps;
  Geodesic g;
  g.s_start = 0.0;
  g.s_end = s_end;
  g.steps = steps;
  g.samples.reserve(steps + 1);
  check_domain(opts, x0);

  Vec x = x0, v = v0;
  const double e0 = speed_sq(p, x, v);
  std::vector<double> speeds;
  speeds.reserve(steps + 1);
  auto record = [&](double s) {
    const double e = speed_sq(p, x, v);
    if (e0 > 0.0) g.speed_drift = std::max(g.speed_drift, std::abs(e - e0) / e0);
    speeds.push_back(e);
    g.samples.push_back({s, x, v});
  };
  record(0.0);
  for (int k = 0; k < steps; ++k) {
    const Vec k1x = v;
    const Vec k1v = geodesic_acceleration(p, x, v);
    const Vec x2 = x + 0.5 * h * k1x, v2 = v + 0.5 * h * k1v;
    check_domain(opts, x2);
    const Vec k2x = v2;
    const Vec k2v = geodesic_acceleration(p, x2, v2);
    const Vec x3 = x + 0.5 * h * k2x, v3 = v + 0.5 * h * k2v;
    check_domain(opts, x3);
    const Vec k3x = v3;
    const Vec k3v = geodesic_acceleration(p, x3, v3);
    const Vec x4 = x + h * k3x, v4 = v + h * k3v;
    check_domain(opts, x4);
    const Vec k4v = geodesic_acceleration(p, x4, v4);
    x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + v4);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    check_domain(opts, x);
    record(h * (k + 1));
  }
  // trapezoid; the integrand is constant up to the drift
  for (int k = 0; k < steps; ++k) {
    g.energy += 0.5 * h * (speeds[k] + speeds[k + 1]);
    g.length += 0.5 * h * (std::sqrt(std::max(speeds[k], 0.0)) + std::sqrt(std::max(speeds[k + 1], 0.0)));
  }
  g.energy = std::abs(g.energy);
  g.length = std::abs(g.length);
  return g;
}

Geodesic geodesic_ivp(const MetricField& p, const Vec& x0, const Vec& v0, double s_end,
                      double step, const GeodesicOptions& opts) {
  if (!(step > 0.0)) throw Error(ErrorCode::PreconditionViolation, "geodesic step must be positive");
  int steps = std::max(1, static_cast<int>(std::ceil(std::abs(s_end) / step - 1e-12)));
  Geodesic g;
  for (int halving = 0; halving <= opts.max_halvings; ++halving) {
    g = geodesic_ivp_fixed(p, x0, v0, s_end, steps, opts);
    if (g.speed_drift <= opts.drift_tol) return g;
    steps *= 2;
  }
  throw Error(ErrorCode::StepFailure,
              "constant-speed drift " + std::to_string(g.speed_drift) + " after step refinement", x0,
              g.speed_drift);
}

namespace {

struct NewtonOutcome {
  bool converged = false;
  Vec v0;
  Geodesic curve;
  int iterations = 0;
  double residual = 0.0;
};

NewtonOutcome shoot_newton(const MetricField& p, const Vec& x1, const Vec& x2, Vec v,
                           const GeodesicOptions& opts) {
  NewtonOutcome out;
  // Relative to the separation too, or short curves are accepted unchanged.
  const double scale = 1.0 + x2.norm();
  const double tol = std::max(1e-15 * scale, std::min(opts.bvp_tol * scale, 1e-6 * (x2 - x1).norm()));
  const Eigen::Index n = x1.size();
  int steps = opts.bvp_initial_steps;
  int refinements = 0;

  Geodesic g;
  try {
    g = geodesic_ivp_fixed(p, x1, v, 1.0, steps, opts);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::LeftRegion) throw;
    out.residual = std::numeric_limits<double>::infinity();
    return out;
  }
  Vec r = g.end() - x2;
  for (int it = 0; it < opts.max_newton; ++it) {
    out.iterations = it + 1;
    if (r.norm() <= tol) {
      if (g.speed_drift <= opts.drift_tol) {
        out.converged = true;
        break;
      }
      if (refinements >= opts.max_halvings) break;
      ++refinements;
      steps *= 2;
      g = geodesic_ivp_fixed(p, x1, v, 1.0, steps, opts);
      r = g.end() - x2;
      continue;
    }
    Mat jac(n, n);
    const double fd = 1e-7 * std::max(1.0, v.norm());
    try {
      for (Eigen::Index j = 0; j < n; ++j) {
        Vec vj = v;
        vj(j) += fd;
        jac.col(j) = (geodesic_ivp_fixed(p, x1, vj, 1.0, steps, opts).end() - g.end()) / fd;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::LeftRegion) throw;
      break;
    }
    Eigen::FullPivLU<Mat> lu(jac);
    if (!lu.isInvertible()) break;
    const Vec delta = lu.solve(-r);
    double lambda = 1.0;
    bool accepted = false;
    const double rn = r.norm();
    for (int ls = 0; ls < 12; ++ls, lambda *= 0.5) {
      const Vec vt = v + lambda * delta;
      try {
        Geodesic gt = geodesic_ivp_fixed(p, x1, vt, 1.0, steps, opts);
        const Vec rt = gt.end() - x2;
        if (rt.norm() <= (1.0 - 1e-4 * lambda) * rn) {
          v = vt;
          g = std::move(gt);
          r = rt;
          accepted = true;
          break;
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::LeftRegion) throw;
      }
    }
    if (!accepted) break;
  }
  out.v0 = v;
  out.residual = r.norm();
  out.curve = std::move(g);
  return out;
}

}  // namespace

BvpResult geodesic_bvp(const MetricField& p, const Vec& x1, const Vec& x2,
                       const GeodesicOptions& opts, const std::optional<Vec>& warm_start) {
  if (x1.size() != p.dim() || x2.size() != p.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "geodesic endpoints have wrong dimension");
  }
  BvpResult res;
  if ((x1 - x2).norm() == 0.0) {
    res.curve.samples.push_back({0.0, x1, Vec::Zero(x1.size())});
    res.curve.s_end = 1.0;
    return res;
  }
  check_domain(opts, x1);
  check_domain(opts, x2);
  NewtonOutcome out = shoot_newton(p, x1, x2, warm_start.value_or(Vec(x2 - x1)), opts);
  if (!out.converged && warm_start) out = shoot_newton(p, x1, x2, x2 - x1, opts);
  if (!out.converged) {
    // Solve to the chord midpoint, then restart from twice that velocity.
    const Vec mid = 0.5 * (x1 + x2);
    NewtonOutcome half = shoot_newton(p, x1, mid, mid - x1, opts);
    if (half.converged) {
      NewtonOutcome retry = shoot_newton(p, x1, x2, 2.0 * half.v0, opts);
      retry.iterations += out.iterations + half.iterations;
      out = std::move(retry);
      res.used_fallback = true;
    }
  }
  if (!out.converged) {
    throw Error(ErrorCode::NoConvergence,
                "shooting did not converge, residual " + std::to_string(out.residual), x1,
                out.residual);
  }
  res.curve = std::move(out.curve);
  res.distance = res.curve.length;
  res.iterations = out.iterations;
  res.residual = out.residual;
  return res;
}

double constant_metric_distance(const Mat& m, const Vec& x1, const Vec& x2) {
  const Vec d = x1 - x2;
  return std::sqrt(std::max(0.0, d.dot(m * d)));
}

}  // namespace riemobs
