#include "riemobs/metric_field.hpp"

namespace riemobs {

MetricField MetricField::constant(const Mat& p) {
  MetricField m = from_expression(static_cast<int>(p.rows()), [p](const auto& x) {
    using T = typename std::decay_t<decltype(x)>::Scalar;
    return MatX<T>(p.cast<T>());
  });
  m.constant_ = true;
  return m;
}

Mat MetricField::deval(int c, const Vec& x) const {
  if (c < 0 || c >= dim_) throw Error(ErrorCode::DimensionMismatch, "deval index out of range");
  if (level_ >= 1) {
    VecX<D1> xd(dim_);
    for (int k = 0; k < dim_; ++k) xd(k) = D1(x(k), k == c ? 1.0 : 0.0);
    const MatX<D1> pd = f1_(xd);
    Mat out(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) out(i, j) = pd(i, j).d;
    return out;
  }
  const double h = fd_step(x(c));
  Vec xp = x, xm = x;
  xp(c) += h;
  xm(c) -= h;
  return (eval(xp) - eval(xm)) / (2.0 * h);
}

std::vector<Mat> MetricField::derivatives(const Vec& x) const {
  return metric_partials<double>(*this, x);
}

Mat MetricField::second_derivative(int a, int b, const Vec& x) const {
  if (level_ >= 2) {
    VecX<D2> xd(dim_);
    for (int k = 0; k < dim_; ++k) {
      xd(k) = D2(D1(x(k), k == a ? 1.0 : 0.0), D1(k == b ? 1.0 : 0.0, 0.0));
    }
    const MatX<D2> pd = f2_(xd);
    Mat out(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) out(i, j) = pd(i, j).d.d;
    return out;
  }
  const double h = fd_step(x(b));
  Vec xp = x, xm = x;
  xp(b) += h;
  xm(b) -= h;
  return (deval(a, xp) - deval(a, xm)) / (2.0 * h);
}

MetricField pullback_metric(const MetricField& p, const SmoothMap& chi) {
  if (chi.out_dim() != p.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "pullback chart lands in the wrong dimension");
  }
  const int level = std::min({p.level(), chi.level() - 1, 2});
  if (level < 0) {
    return MetricField::from_callback(chi.in_dim(), [p, chi](const Vec& u) -> Mat {
      const Mat j = chi.jacobian(u);
      return symmetrize<double>(j.transpose() * p.eval(chi.eval(u)) * j);
    });
  }
  return MetricField::from_expression(
      chi.in_dim(),
      [p, chi](const auto& u) {
        using T = typename std::decay_t<decltype(u)>::Scalar;
        const MatX<T> j = jacobian_of<T>(chi, u);
        const MatX<T> pu = p.eval_t<T>(chi.eval_t<T>(u));
        return symmetrize<T>(j.transpose() * pu * j);
      },
      level);
}

}  // namespace riemobs
