#include "riemobs/smooth_map.hpp"

namespace riemobs {

Mat SmoothMap::jacobian(const Vec& x) const { return jacobian_of<double>(*this, x); }

Mat SmoothMap::hessian_component(int i, const Vec& x) const {
  if (i < 0 || i >= out_) throw Error(ErrorCode::DimensionMismatch, "hessian component out of range");
  const int n = in_;
  Mat hess(n, n);
  if (level_ >= 2) {
    VecX<D2> xd(n);
    for (int a = 0; a < n; ++a) {
      for (int b = a; b < n; ++b) {
        for (int k = 0; k < n; ++k) {
          xd(k) = D2(D1(x(k), k == a ? 1.0 : 0.0), D1(k == b ? 1.0 : 0.0, 0.0));
        }
        const double v = f2_(xd)(i).d.d;
        hess(a, b) = v;
        hess(b, a) = v;
      }
    }
    return hess;
  }
  // Differentiate the Jacobian row, exact or finite-difference.
  for (int b = 0; b < n; ++b) {
    const double h = fd_step(x(b));
    Vec xp = x, xm = x;
    xp(b) += h;
    xm(b) -= h;
    hess.col(b) = ((jacobian(xp).row(i) - jacobian(xm).row(i)) / (2.0 * h)).transpose();
  }
  return symmetrize<double>(hess);
}

std::vector<Mat> SmoothMap::hessians(const Vec& x) const {
  std::vector<Mat> out;
  out.reserve(out_);
  if (level_ >= 2) {
    const int n = in_;
    out.assign(out_, Mat(n, n));
    VecX<D2> xd(n);
    for (int a = 0; a < n; ++a) {
      for (int b = a; b < n; ++b) {
        for (int k = 0; k < n; ++k) {
          xd(k) = D2(D1(x(k), k == a ? 1.0 : 0.0), D1(k == b ? 1.0 : 0.0, 0.0));
        }
        const VecX<D2> yd = f2_(xd);
        for (int i = 0; i < out_; ++i) {
          out[i](a, b) = yd(i).d.d;
          out[i](b, a) = yd(i).d.d;
        }
      }
    }
    return out;
  }
  for (int i = 0; i < out_; ++i) out.push_back(hessian_component(i, x));
  return out;
}

Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x) {
  const Vec f0 = f(x);
  Mat jac(f0.size(), x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double h = fd_step(x(j));
    Vec xp = x, xm = x;
    xp(j) += h;
    xm(j) -= h;
    jac.col(j) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return jac;
}

SmoothMap affine_map(const Mat& a, const Vec& b) {
  return SmoothMap::from_expression(
      static_cast<int>(a.cols()), static_cast<int>(a.rows()), [a, b](const auto& x) {
        using T = typename std::decay_t<decltype(x)>::Scalar;
        VecX<T> out(a.rows());
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
          T acc = T(b(i));
          for (Eigen::Index j = 0; j < a.cols(); ++j) acc += T(a(i, j)) * x(j);
          out(i) = acc;
        }
        return out;
      });
}

}  // namespace riemobs
