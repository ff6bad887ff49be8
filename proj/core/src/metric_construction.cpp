#include "riemobs/metric_construction.hpp"

#include <cmath>

namespace riemobs {

namespace {

template <class T>
MatX<T> pmod_eval(const MetricField& p, const MetricField& q, const SmoothMap& h, const VecX<T>& x) {
  const MatX<T> dh = jacobian_of<T>(h, x);
  const MatX<T> pv = p.eval_t<T>(x);
  const MatX<T> g = dh * lu_solve<T>(pv, MatX<T>(dh.transpose()));
  const MatX<T> qy = q.eval_t<T>(h.eval_t<T>(x));
  const MatX<T> bracket = qy - inverse<T>(g);
  return symmetrize<T>(pv + dh.transpose() * bracket * dh);
}

template <class T>
MatX<T> product_eval(const MetricField& q, const OrthComplementMap& o, const SmoothMap& h,
                     const VecX<T>& x) {
  const MatX<T> dh = jacobian_of<T>(h, x);
  const MatX<T> dp = jacobian_of<T>(o.h_perp, x);
  const MatX<T> qy = q.eval_t<T>(h.eval_t<T>(x));
  const MatX<T> rx = o.r.eval_t<T>(o.h_perp.eval_t<T>(x));
  return symmetrize<T>(dh.transpose() * qy * dh + dp.transpose() * rx * dp);
}

}  // namespace

MetricField p_mod(const MetricField& p, const MetricField& q, const SmoothMap& h) {
  if (h.in_dim() != p.dim() || h.out_dim() != q.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "p_mod: metric and output dimensions disagree");
  }
  const int level = std::min({p.level(), q.level(), h.level() - 1, 2});
  if (level < 0) {
    return MetricField::from_callback(p.dim(), [p, q, h](const Vec& x) { return pmod_eval<double>(p, q, h, x); });
  }
  return MetricField::from_expression(
      p.dim(),
      [p, q, h](const auto& x) {
        using T = typename std::decay_t<decltype(x)>::Scalar;
        return pmod_eval<T>(p, q, h, x);
      },
      level);
}

Mat schur_py(const Mat& p, int p_out) {
  const Eigen::Index n = p.rows();
  if (p_out < 1 || p_out > n || p.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "schur_py: bad block size");
  }
  if (p_out == n) return p;
  const Mat pyy = p.topLeftCorner(p_out, p_out);
  const Mat pyz = p.topRightCorner(p_out, n - p_out);
  const Mat pzz = p.bottomRightCorner(n - p_out, n - p_out);
  Eigen::FullPivLU<Mat> lu(pzz);
  lu.setThreshold(1e-13);
  if (!lu.isInvertible()) throw Error(ErrorCode::SingularBlock, "P_zz is singular");
  return symmetrize<double>(Mat(pyy - pyz * lu.solve(Mat(pyz.transpose()))));
}

void verify_product_ranks(const SmoothMap& h, const OrthComplementMap& ortho, const Vec& x) {
  const Mat dh = h.jacobian(x);
  const Mat dp = ortho.h_perp.jacobian(x);
  const int n = h.in_dim();
  const int want = ortho.declared_rank > 0 ? ortho.declared_rank : n - h.out_dim();
  const int r_perp = numerical_rank(dp, 1e-9);
  if (r_perp != want) {
    throw Error(ErrorCode::RankViolation,
                "rank(dh_perp) = " + std::to_string(r_perp) + ", expected " + std::to_string(want), x);
  }
  Mat stacked(dh.rows() + dp.rows(), n);
  stacked << dh, dp;
  const int r_all = numerical_rank(stacked, 1e-9);
  if (r_all != n) {
    throw Error(ErrorCode::RankViolation,
                "rank([dh; dh_perp]) = " + std::to_string(r_all) + ", expected " + std::to_string(n), x);
  }
}

ConstructedMetric build_product_metric(const MetricField& q, const OrthComplementMap& ortho,
                                       const SmoothMap& h, const Region* region, int samples,
                                       std::uint64_t seed) {
  if (ortho.h_perp.in_dim() != h.in_dim() || ortho.r.dim() != ortho.h_perp.out_dim() ||
      q.dim() != h.out_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "product metric ingredients have inconsistent dimensions");
  }
  if (region != nullptr) {
    for (const Vec& x : region->sample(seed, samples)) verify_product_ranks(h, ortho, x);
  }
  ConstructedMetric out;
  out.q = q;
  out.h = h;
  out.ortho = ortho;
  const int level =
      std::min({q.level(), ortho.r.level(), h.level() - 1, ortho.h_perp.level() - 1, 2});
  if (level < 0) {
    out.metric = MetricField::from_callback(
        h.in_dim(), [q, ortho, h](const Vec& x) { return product_eval<double>(q, ortho, h, x); });
  } else {
    out.metric = MetricField::from_expression(
        h.in_dim(),
        [q, ortho, h](const auto& x) {
          using T = typename std::decay_t<decltype(x)>::Scalar;
          return product_eval<T>(q, ortho, h, x);
        },
        level);
  }
  return out;
}

SufficiencyValue a2_sufficiency_lhs(const SystemModel& model, const OrthComplementMap& ortho,
                                    const Vec& x, const Vec& v, double q) {
  const Mat dh = model.h.jacobian(x);
  if (numerical_rank(dh) < model.p()) {
    throw Error(ErrorCode::RankDeficientOutput, "output Jacobian is rank deficient", x);
  }
  const SmoothMap& hp = ortho.h_perp;
  const Mat dp = hp.jacobian(x);
  const Vec g = dp * model.f.eval(x);
  const Vec w = dp * v;
  const Vec xi = hp.eval(x);
  const Mat r = ortho.r.eval(xi);
  const auto dr = ortho.r.derivatives(xi);

  // dg[v], the derivative of dh_perp(x) f(x) along v
  Vec dg;
  if (hp.level() >= 2 && model.f.level() >= 1) {
    VecX<D1> xd(x.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) xd(k) = D1(x(k), v(k));
    const MatX<D1> dpd = jacobian_of<D1>(hp, xd);
    const VecX<D1> fd = model.f.eval_t<D1>(xd);
    const VecX<D1> gd = dpd * fd;
    dg.resize(gd.size());
    for (Eigen::Index i = 0; i < gd.size(); ++i) dg(i) = gd(i).d;
  } else {
    const double h = fd_step(v.norm());
    auto gfun = [&](const Vec& z) -> Vec { return hp.jacobian(z) * model.f.eval(z); };
    dg = (gfun(x + h * v) - gfun(x - h * v)) / (2.0 * h);
  }

  Mat dr_g = Mat::Zero(r.rows(), r.cols());
  for (std::size_t k = 0; k < dr.size(); ++k) dr_g += dr[k] * g(static_cast<Eigen::Index>(k));
  SufficiencyValue out;
  out.w_r_w = w.dot(r * w);
  out.lhs = w.dot(dr_g * w) + 2.0 * dg.dot(r * w);
  out.rhs = -q * out.w_r_w;
  return out;
}

Ex8Inequalities ex8_inequalities(double a, double b, double q, double epsilon) {
  const double e = epsilon;
  Ex8Inequalities s;
  s.gain_slack = (2.0 - q) * b - 4.0 * std::pow(1.0 / e + 1.0, 2);
  s.bound_slack = 1.0 - 4.0 * a * b / (e * e) - q;
  const double left = 64.0 * a * a / std::pow(e, 6) * std::pow(b + 1.0 + a * b * b, 2) *
                      std::pow(1.0 + 4.0 * a / (e * e), 2);
  const double right =
      4.0 * (0.5 * a * std::min(2.0 - q, b) * e * e / 4.0 - q) * (1.0 - 4.0 * a * b / (e * e) - q);
  // Both factors of the right side must be positive for the product bound to mean anything.
  s.cross_slack = (0.5 * a * std::min(2.0 - q, b) * e * e / 4.0 - q) > 0.0 ? right - left : -1.0;
  return s;
}

std::pair<double, double> ex8_pointwise_slacks(double a, double b, double q, const Vec& x) {
  const double y = x(0), za = x(1), zb = x(2);
  const double xi = za - y;
  const double w = 1.0 + a * xi * xi;
  const double diag_t = 1.0 - a * b * y * y - q;
  const double diag_a = 2.0 * a * xi * (y * zb + xi + y) + a * b * y * y * w - q * w;
  const double off = 2.0 * b * (xi + y) * w + y * xi * xi + a * b * b * y * y * y * w;
  return {diag_t, 4.0 * diag_a * diag_t - a * a * off * off};
}

Ex8Parameters tune_ex8_parameters(double epsilon, double c) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(ErrorCode::NoFeasiblePoint, "epsilon must lie in (0, 1)");
  }
  Ex8Parameters out;
  out.epsilon = epsilon;
  out.c = c;
  out.b = 4.0 * std::pow(1.0 / epsilon + 1.0, 2);
  for (int k = 1; k <= 64; ++k) {
    const double a = std::ldexp(1.0, -k);
    // q -> 0+ must be feasible before bisecting.
    if (!ex8_inequalities(a, out.b, 0.0, epsilon).satisfied()) continue;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (ex8_inequalities(a, out.b, mid, epsilon).satisfied() ? lo : hi) = mid;
    }
    if (!(lo > 0.0)) continue;
    out.a = a;
    out.a_exponent = k;
    out.q_sup = lo;
    out.q = 0.5 * lo;
    return out;
  }
  throw Error(ErrorCode::NoFeasiblePoint, "no a = 2^-k, k <= 64, satisfies the inequalities");
}

Mat solve_lyapunov(const Mat& a, const Mat& m) {
  const Eigen::Index n = a.rows();
  const Mat id = Mat::Identity(n, n);
  // vec(A^T X + X A) = (I kron A^T + A^T kron I) vec(X)
  Mat k = Mat::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      k.block(i * n, j * n, n, n) += id(i, j) * a.transpose();
      k.block(i * n, j * n, n, n) += a(j, i) * id;
    }
  }
  const Vec rhs = Eigen::Map<const Vec>(m.data(), n * n);
  Eigen::FullPivLU<Mat> lu(k);
  if (!lu.isInvertible()) throw Error(ErrorCode::SingularMatrix, "Lyapunov operator is singular");
  const Vec sol = lu.solve(rhs);
  return symmetrize<double>(Mat(Eigen::Map<const Mat>(sol.data(), n, n)));
}

}  // namespace riemobs
