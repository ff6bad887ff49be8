#include "riemobs/geometry.hpp"

#include <cmath>

namespace riemobs {

double ChristoffelTensor::norm() const {
  double acc = 0.0;
  for (const auto& g : gamma) acc += g.squaredNorm();
  return std::sqrt(acc);
}

Vec ChristoffelTensor::contract(const Vec& v) const {
  Vec out(gamma.size());
  for (std::size_t c = 0; c < gamma.size(); ++c) out(c) = v.dot(gamma[c] * v);
  return out;
}

ChristoffelTensor christoffel(const MetricField& p, const Vec& x) {
  const Mat pv = p.eval(x);
  cholesky_or_throw(pv, x);
  ChristoffelTensor out;
  out.point = x;
  out.gamma = christoffel_from<double>(pv, p.derivatives(x));
  return out;
}

Mat lie_derivative_metric(const MetricField& p, const SmoothMap& f, const Vec& x) {
  const Mat pv = p.eval(x);
  const Vec fv = f.eval(x);
  const Mat df = f.jacobian(x);
  const auto dp = p.derivatives(x);
  Mat out = pv * df + df.transpose() * pv;
  for (int c = 0; c < p.dim(); ++c) out += dp[c] * fv(c);
  return symmetrize<double>(out);
}

Mat riemannian_gradient(const MetricField& p, const SmoothMap& h, const Vec& x) {
  const Mat l = cholesky_or_throw(p.eval(x), x);
  return cholesky_solve(l, h.jacobian(x).transpose());
}

std::vector<Mat> riemannian_hessian(const MetricField& p, const SmoothMap& h, const Vec& x) {
  const ChristoffelTensor g = christoffel(p, x);
  const Mat dh = h.jacobian(x);
  std::vector<Mat> out = h.hessians(x);
  for (int i = 0; i < h.out_dim(); ++i)
    for (int c = 0; c < p.dim(); ++c) out[i] -= g.gamma[c] * dh(i, c);
  for (auto& m : out) m = symmetrize<double>(m);
  return out;
}

SffEvaluation evaluate_sff(const MetricField& p, const MetricField& q, const SmoothMap& h,
                           const Vec& x) {
  SffEvaluation ev;
  ev.dh = h.jacobian(x);
  if (numerical_rank(ev.dh) < h.out_dim()) {
    throw Error(ErrorCode::RankDeficientOutput, "output map is not a submersion here", x);
  }
  const ChristoffelTensor g = christoffel(p, x);
  const Vec y = h.eval(x);
  const ChristoffelTensor delta = christoffel(q, y);
  const auto hess = h.hessians(x);
  ev.gamma_norm = g.norm();
  ev.dh_norm = ev.dh.norm();
  for (int i = 0; i < h.out_dim(); ++i) {
    Mat ii = hess[i];
    for (int c = 0; c < p.dim(); ++c) ii -= g.gamma[c] * ev.dh(i, c);
    ii += ev.dh.transpose() * delta.gamma[i] * ev.dh;
    ev.ii.push_back(symmetrize<double>(ii));
    ev.hessian_norms.push_back(hess[i].norm());
  }
  return ev;
}

double SffEvaluation::scaled_norm() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < ii.size(); ++i) {
    const double scale = 1.0 + hessian_norms[i] + gamma_norm * dh_norm;
    worst = std::max(worst, ii[i].norm() / scale);
  }
  return worst;
}

std::vector<Mat> second_fundamental_form(const MetricField& p, const MetricField& q,
                                         const SmoothMap& h, const Vec& x) {
  return evaluate_sff(p, q, h, x).ii;
}

std::vector<Mat> transform_sff(const Mat& dphi, const Mat& dpsi, const std::vector<Mat>& ii) {
  if (numerical_rank(dphi, 1e-12) < dphi.rows() || numerical_rank(dpsi, 1e-12) < dpsi.rows()) {
    throw Error(ErrorCode::SingularJacobian, "chart change is not invertible");
  }
  const Mat inv = dphi.inverse();
  std::vector<Mat> out;
  for (Eigen::Index k = 0; k < dpsi.rows(); ++k) {
    Mat mixed = Mat::Zero(dphi.rows(), dphi.cols());
    for (std::size_t i = 0; i < ii.size(); ++i) mixed += dpsi(k, static_cast<Eigen::Index>(i)) * ii[i];
    out.push_back(symmetrize<double>(inv.transpose() * mixed * inv));
  }
  return out;
}

namespace {

// dGamma[e][c](a, b) = d_e Gamma^c_ab
std::vector<std::vector<Mat>> christoffel_partials(const MetricField& p, const Vec& x) {
  const int n = p.dim();
  std::vector<std::vector<Mat>> out(n);
  if (p.level() >= 2) {
    for (int e = 0; e < n; ++e) {
      VecX<D1> xd(n);
      for (int k = 0; k < n; ++k) xd(k) = D1(x(k), k == e ? 1.0 : 0.0);
      const MatX<D1> pd = p.eval_t<D1>(xd);
      const auto dpd = metric_partials<D1>(p, xd);
      const auto gd = christoffel_from<D1>(pd, dpd);
      for (int c = 0; c < n; ++c) {
        Mat m(n, n);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) m(a, b) = gd[c](a, b).d;
        out[e].push_back(m);
      }
    }
    return out;
  }
  for (int e = 0; e < n; ++e) {
    const double h = fd_step(x(e));
    Vec xp = x, xm = x;
    xp(e) += h;
    xm(e) -= h;
    const auto gp = christoffel(p, xp).gamma;
    const auto gm = christoffel(p, xm).gamma;
    for (int c = 0; c < n; ++c) out[e].push_back((gp[c] - gm[c]) / (2.0 * h));
  }
  return out;
}

}  // namespace

namespace {

double riemann_from(const ChristoffelTensor& g, const std::vector<std::vector<Mat>>& dg, int a, int b, int c, int d) {
  double r = dg[c][a](d, b) - dg[d][a](c, b);
  for (int e = 0; e < g.dim(); ++e) r += g(c, e, a) * g(d, b, e) - g(d, e, a) * g(c, b, e);
  return r;
}

}  // namespace

double curvature_component(const MetricField& p, const Vec& x, int a, int b, int c, int d) {
  const int n = p.dim();
  for (int idx : {a, b, c, d}) {
    if (idx < 0 || idx >= n) throw Error(ErrorCode::DimensionMismatch, "curvature index out of range");
  }
  return riemann_from(christoffel(p, x), christoffel_partials(p, x), a, b, c, d);
}

double scalar_curvature(const MetricField& p, const Vec& x) {
  const int n = p.dim();
  const ChristoffelTensor g = christoffel(p, x);
  const auto dg = christoffel_partials(p, x);
  const Mat inv = p.eval(x).inverse();
  double s = 0.0;
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d) {
      double ric = 0.0;
      for (int a = 0; a < n; ++a) ric += riemann_from(g, dg, a, b, a, d);
      s += inv(b, d) * ric;
    }
  return s;
}

double sectional_curvature(const MetricField& p, const Vec& x, int i, int j) {
  const Mat pv = p.eval(x);
  double r_lowered = 0.0;
  for (int a = 0; a < p.dim(); ++a) r_lowered += pv(i, a) * curvature_component(p, x, a, j, i, j);
  return r_lowered / (pv(i, i) * pv(j, j) - pv(i, j) * pv(i, j));
}

}  // namespace riemobs
