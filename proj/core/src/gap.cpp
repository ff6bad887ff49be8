#include "riemobs/gap.hpp"

namespace riemobs {

Mat GapFunction::diagonal_hessian(const Vec& y) const {
  const auto n = y.size();
  Mat out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double h = fd_step(y(j));
    Vec yp = y, ym = y;
    yp(j) += h;
    ym(j) -= h;
    out.col(j) = (grad1(yp, y) - grad1(ym, y)) / (2.0 * h);
  }
  return symmetrize<double>(out);
}

GapFunction gap_sq_distance(const MetricField& q, bool flat, const SmoothMap* psi) {
  GapFunction g;
  if (flat) {
    if (psi == nullptr) throw Error(ErrorCode::UnsupportedQ, "flat gap function needs an output chart");
    const SmoothMap chart = *psi;
    g.eval = [chart](const Vec& y1, const Vec& y2) { return (chart.eval(y1) - chart.eval(y2)).squaredNorm(); };
    g.grad1 = [chart](const Vec& y1, const Vec& y2) -> Vec {
      return 2.0 * chart.jacobian(y1).transpose() * (chart.eval(y1) - chart.eval(y2));
    };
    return g;
  }
  if (!q.is_constant()) {
    throw Error(ErrorCode::UnsupportedQ, "squared distance is only available for constant or flattened Q");
  }
  const Mat qm = q.eval(Vec::Zero(q.dim()));
  g.eval = [qm](const Vec& y1, const Vec& y2) {
    const Vec d = y1 - y2;
    return d.dot(qm * d);
  };
  g.grad1 = [qm](const Vec& y1, const Vec& y2) -> Vec { return 2.0 * qm * (y1 - y2); };
  return g;
}

}  // namespace riemobs
