#include "riemobs/conditions.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace riemobs {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

DistributionBasis distributions(const MetricField& p, const SmoothMap& h, const Vec& x) {
  const Mat dh = h.jacobian(x);
  if (numerical_rank(dh) < h.out_dim()) {
    throw Error(ErrorCode::RankDeficientOutput, "output Jacobian is rank deficient", x);
  }
  DistributionBasis out;
  out.tangent = null_space(dh);
  out.orth = riemannian_gradient(p, h, x);
  return out;
}

std::pair<double, Vec> a2_kernel_eigen(const SystemModel& model, const MetricField& p, const Vec& x) {
  const Mat dh = model.h.jacobian(x);
  if (numerical_rank(dh) < model.p()) {
    throw Error(ErrorCode::RankDeficientOutput, "output Jacobian is rank deficient", x);
  }
  const Mat v = null_space(dh);
  if (v.cols() == 0) return {-std::numeric_limits<double>::infinity(), Vec()};
  const Mat pv = p.eval(x);
  cholesky_or_throw(pv, x);
  const Mat lf = lie_derivative_metric(p, model.f, x);
  const Mat a = symmetrize<double>(Mat(v.transpose() * lf * v));
  const Mat b = symmetrize<double>(Mat(v.transpose() * pv * v));
  auto [lambda, u] = max_generalized_eigen(a, b);
  Vec dir = v * u;
  dir /= dir.norm();
  return {lambda, dir};
}

ConditionReport check_a2(const SystemModel& model, const MetricField& p, const SamplingOptions& opts,
                         double q_min) {
  ConditionReport rep;
  rep.condition = "a2";
  rep.seed = opts.seed;
  rep.tolerance = q_min;
  if (model.p() == model.n()) {
    rep.verdict = Verdict::Pass;
    rep.margin = std::numeric_limits<double>::infinity();
    rep.detail = "output kernel is trivial";
    return rep;
  }
  const auto pts = model.region.sample(opts.seed, opts.samples);
  double worst = -std::numeric_limits<double>::infinity();
  for (const Vec& x : pts) {
    auto [lambda, dir] = a2_kernel_eigen(model, p, x);
    ++rep.samples_checked;
    if (lambda > worst) {
      worst = lambda;
      rep.witness = Witness{x, dir};
    }
  }
  rep.margin = -worst;
  rep.verdict = rep.margin >= q_min ? Verdict::Pass : Verdict::Fail;
  return rep;
}

double a2_rho_certificate(const SystemModel& model, const MetricField& p, const Vec& x, double q) {
  const Mat lf = lie_derivative_metric(p, model.f, x);
  const Mat pv = p.eval(x);
  const Mat dh = model.h.jacobian(x);
  const Mat dhtdh = dh.transpose() * dh;
  const double scale = 1e-12 * (1.0 + lf.norm() + pv.norm());
  auto holds = [&](double rho) {
    const Mat m = symmetrize<double>(Mat(lf - rho * dhtdh + q * pv));
    Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff() <= scale * (1.0 + std::abs(rho) * dhtdh.norm());
  };
  double lo = 0.0, hi = 1.0;
  if (holds(0.0)) {
    hi = 0.0;
    lo = -1.0;
    while (holds(lo)) {
      hi = lo;
      lo *= 2.0;
      if (lo < -1e12) return lo;
    }
  } else {
    while (!holds(hi)) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e12) return std::numeric_limits<double>::infinity();
    }
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12 * (1.0 + std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (holds(mid) ? hi : lo) = mid;
  }
  return hi;
}

double SffBlocks::max_norm(const std::vector<Mat>& blocks) const {
  double worst = 0.0;
  for (const auto& b : blocks) worst = std::max(worst, b.size() == 0 ? 0.0 : b.norm());
  return worst;
}

namespace {

SffBlocks blocks_from(const std::vector<Mat>& ii, const Mat& tangent, const Mat& orth) {
  SffBlocks out;
  out.tangent = tangent;
  out.orth = orth;
  for (const Mat& m : ii) {
    out.tt.push_back(tangent.transpose() * m * tangent);
    out.oo.push_back(orth.transpose() * m * orth);
    out.mixed.push_back(orth.transpose() * m * tangent);
  }
  return out;
}

}  // namespace

SffBlocks sff_blocks(const MetricField& p, const MetricField& q, const SmoothMap& h, const Vec& x) {
  const DistributionBasis basis = distributions(p, h, x);
  return blocks_from(second_fundamental_form(p, q, h, x), basis.tangent, basis.orth);
}

ConditionReport check_a3_nullity(const SystemModel& model, const MetricField& p, const MetricField& q,
                                 const SamplingOptions& opts, double tol) {
  ConditionReport rep;
  rep.condition = "a3-nullity";
  rep.seed = opts.seed;
  rep.tolerance = tol;
  const auto pts = model.region.sample(opts.seed, opts.samples);
  double worst = -1.0, worst_tt = -1.0;
  Vec worst_x, tt_x, tt_dir;
  std::string worst_block;
  for (const Vec& x : pts) {
    const SffEvaluation ev = evaluate_sff(p, q, model.h, x);
    ++rep.samples_checked;
    const double scaled = ev.scaled_norm();
    const DistributionBasis basis = distributions(p, model.h, x);
    const SffBlocks blocks = blocks_from(ev.ii, basis.tangent, basis.orth);
    double scale = 1.0 + ev.gamma_norm * ev.dh_norm;
    for (double hn : ev.hessian_norms) scale = std::max(scale, 1.0 + hn + ev.gamma_norm * ev.dh_norm);
    const double tt = blocks.max_norm(blocks.tt) / scale;
    const double oo = blocks.max_norm(blocks.oo) / scale;
    const double mixed = blocks.max_norm(blocks.mixed) / scale;
    if (basis.tangent.cols() > 0 && tt > worst_tt) {
      worst_tt = tt;
      tt_x = x;
      std::size_t k = 0;
      for (std::size_t i = 0; i < blocks.tt.size(); ++i)
        if (blocks.tt[i].norm() > blocks.tt[k].norm()) k = i;
      Eigen::SelfAdjointEigenSolver<Mat> es(blocks.tt[k]);
      Eigen::Index j;
      es.eigenvalues().cwiseAbs().maxCoeff(&j);
      tt_dir = (basis.tangent * es.eigenvectors().col(j)).normalized();
    }
    if (scaled > worst) {
      worst = scaled;
      worst_x = x;
      worst_block = tt >= oo && tt >= mixed ? "tangent-tangent" : (oo >= mixed ? "orthogonal-orthogonal" : "mixed");
      rep.witness = Witness{x, riemannian_gradient(p, model.h, x).col(0).normalized()};
    }
  }
  rep.margin = std::max(worst, 0.0);
  rep.verdict = rep.margin <= tol ? Verdict::Pass : Verdict::Fail;
  if (rep.verdict == Verdict::Pass) {
    rep.witness.reset();
    return rep;
  }
  // Geodesics along output level sets only see the tangent-tangent block, so
  // it is the preferred witness whenever it is itself above the tolerance.
  std::ostringstream detail;
  if (worst_tt > tol) {
    detail << "tangent-tangent " << worst_tt;
    rep.witness = Witness{tt_x, tt_dir};
  } else {
    detail << worst_block;
  }
  rep.detail = detail.str();
  return rep;
}

double submersion_residual(const MetricField& p, const MetricField& q, const SmoothMap& h, const Vec& x) {
  const Mat dh = h.jacobian(x);
  if (numerical_rank(dh) < h.out_dim()) {
    throw Error(ErrorCode::RankDeficientOutput, "output Jacobian is rank deficient", x);
  }
  const Mat l = cholesky_or_throw(p.eval(x), x);
  const Mat g = dh * cholesky_solve(l, dh.transpose());
  const Mat qy = q.eval(h.eval(x));
  return (g.inverse() - qy).norm() / qy.norm();
}

ConditionReport check_submersion(const MetricField& p, const MetricField& q, const SmoothMap& h,
                                 const Region& region, const SamplingOptions& opts, double tol) {
  ConditionReport rep;
  rep.condition = "submersion";
  rep.seed = opts.seed;
  rep.tolerance = tol;
  double worst = -1.0;
  for (const Vec& x : region.sample(opts.seed, opts.samples)) {
    const double r = submersion_residual(p, q, h, x);
    ++rep.samples_checked;
    if (r > worst) {
      worst = r;
      rep.witness = Witness{x, riemannian_gradient(p, h, x).col(0).normalized()};
    }
  }
  rep.margin = std::max(worst, 0.0);
  rep.verdict = rep.margin <= tol ? Verdict::Pass : Verdict::Fail;
  return rep;
}

double monotonicity_margin(const Geodesic& g, const SmoothMap& h, const GapFunction& gap, int grid,
                           std::optional<Witness>* where) {
  const int last = static_cast<int>(g.samples.size()) - 1;
  if (last < 1) return std::numeric_limits<double>::infinity();
  const int m = std::max(3, std::min(grid, last + 1));
  std::vector<int> idx(m);
  for (int k = 0; k < m; ++k) idx[k] = static_cast<int>(std::lround(static_cast<double>(k) * last / (m - 1)));
  std::vector<Vec> y(m), dy(m);
  for (int k = 0; k < m; ++k) {
    const auto& s = g.samples[idx[k]];
    y[k] = h.eval(s.point);
    dy[k] = h.jacobian(s.point) * s.velocity;
  }
  auto differs = [&](int a, int b) {
    return (y[a] - y[b]).norm() > 1e-9 * (1.0 + y[b].norm());
  };
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      bool admissible = false;
      if (j > i) {
        for (int k = j + 1; k < m && !admissible; ++k) admissible = differs(k, i);
      } else {
        for (int k = j - 1; k >= 0 && !admissible; --k) admissible = differs(k, i);
      }
      if (!admissible) continue;
      const double sign = j > i ? 1.0 : -1.0;
      const double d = sign * gap.grad1(y[j], y[i]).dot(dy[j]);
      if (d < worst) {
        worst = d;
        if (where != nullptr) {
          const auto& s = g.samples[idx[j]];
          *where = Witness{s.point, (sign * s.velocity).normalized()};
        }
      }
    }
  }
  return worst;
}

ConditionReport check_geodesic_monotonicity_direct(const SystemModel& model, const MetricField& p,
                                                   const GapFunction& gap, const MonotonicityOptions& opts) {
  ConditionReport rep;
  rep.condition = "a3-direct";
  rep.seed = opts.seed;
  rep.tolerance = opts.tol;
  const Region& region = model.region;
  const auto pts = region.sample(opts.seed, opts.trials);
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double reach = opts.reach * (region.hi - region.lo).minCoeff();

  GeodesicOptions gopt;
  gopt.domain = [&region](const Vec& x) { return region.contains(x); };

  double worst = std::numeric_limits<double>::infinity();
  int conclusive = 0;
  for (int t = 0; t < opts.trials; ++t) {
    const Vec& x = pts[t];
    Vec dir(model.n());
    for (Eigen::Index i = 0; i < dir.size(); ++i) dir(i) = normal(rng);
    try {
      BvpResult bvp;
      if (t % 2 == 0) {
        dir *= reach / dir.norm();
        Vec x2 = x + dir;
        for (int shrink = 0; shrink < 6 && !region.contains(x2); ++shrink) {
          dir *= 0.5;
          x2 = x + dir;
        }
        if (!region.contains(x2)) {
          ++rep.inconclusive_samples;
          continue;
        }
        bvp = geodesic_bvp(p, x, x2, gopt);
      } else {
        const Mat ker = null_space(model.h.jacobian(x));
        Vec w = ker.cols() > 0 ? Vec(ker * dir.head(ker.cols())) : dir;
        w /= w.norm();
        const Geodesic back = geodesic_ivp(p, x, -w, reach, reach / 16.0, gopt);
        const Vec a = back.end();
        const Vec va = -back.samples.back().velocity;
        const Geodesic fwd = geodesic_ivp(p, x, w, reach, reach / 16.0, gopt);
        bvp = geodesic_bvp(p, a, fwd.end(), gopt, Vec(2.0 * reach * va));
      }
      std::optional<Witness> where;
      const double d = monotonicity_margin(bvp.curve, model.h, gap, opts.grid, &where);
      ++conclusive;
      if (d < worst) {
        worst = d;
        if (where) rep.witness = where;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoConvergence && e.code() != ErrorCode::LeftRegion &&
          e.code() != ErrorCode::StepFailure) {
        throw;
      }
      ++rep.inconclusive_samples;
    }
  }
  rep.samples_checked = conclusive;
  rep.margin = std::isfinite(worst) ? worst : 0.0;
  if (conclusive == 0) {
    rep.verdict = Verdict::Inconclusive;
  } else {
    rep.verdict = rep.margin >= -opts.tol ? Verdict::Pass : Verdict::Fail;
  }
  if (rep.verdict != Verdict::Fail) rep.witness.reset();
  return rep;
}

}  // namespace riemobs
