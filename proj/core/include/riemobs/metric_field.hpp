#pragma once

// Type-erased symmetric matrix fields x -> P(x).
//
// Same level scheme as SmoothMap: expression-built fields carry evaluators
// up to D2, so first and second partial derivatives of P are exact. Composite
// fields (pullbacks, P_mod, product metrics) inherit the minimum level their
// ingredients allow.

#include <functional>
#include <string>
#include <vector>

#include "riemobs/linalg.hpp"
#include "riemobs/smooth_map.hpp"

namespace riemobs {

class MetricField {
 public:
  template <class T>
  using Fn = std::function<MatX<T>(const VecX<T>&)>;

  MetricField() = default;

  /// `f` must be callable as f(const VecX<T>&) -> MatX<T> for T up to D2.
  template <class F>
  static MetricField from_expression(int dim, F f, int level = 2) {
    MetricField m;
    m.dim_ = dim;
    m.level_ = std::clamp(level, 0, 2);
    m.f0_ = [f](const Vec& x) -> Mat { return f(x); };
    if (m.level_ >= 1) m.f1_ = [f](const VecX<D1>& x) -> MatX<D1> { return f(x); };
    if (m.level_ >= 2) m.f2_ = [f](const VecX<D2>& x) -> MatX<D2> { return f(x); };
    return m;
  }

  static MetricField from_callback(int dim, Fn<double> f) {
    MetricField m;
    m.dim_ = dim;
    m.level_ = 0;
    m.f0_ = std::move(f);
    return m;
  }

  static MetricField constant(const Mat& p);

  int dim() const { return dim_; }
  int level() const { return level_; }
  bool empty() const { return !f0_; }
  /// True when the field is known to be independent of x.
  bool is_constant() const { return constant_; }

  template <class T>
  MatX<T> eval_t(const VecX<T>& x) const {
    if (x.size() != dim_) throw Error(ErrorCode::DimensionMismatch, "metric input has wrong dimension");
    constexpr int depth = dual_depth_v<T>;
    if (depth > level_) {
      throw Error(ErrorCode::UnsupportedOrder,
                  "metric evaluated at dual depth " + std::to_string(depth) +
                      " but only supports " + std::to_string(level_));
    }
    if constexpr (depth == 0) {
      return f0_(x);
    } else if constexpr (depth == 1) {
      return f1_(x);
    } else {
      static_assert(depth == 2, "metrics support at most second derivatives");
      return f2_(x);
    }
  }

  Mat eval(const Vec& x) const { return eval_t<double>(x); }
  /// dP/dx_c at x.
  Mat deval(int c, const Vec& x) const;
  /// All first partials, index c -> dP/dx_c.
  std::vector<Mat> derivatives(const Vec& x) const;
  /// d^2P/dx_a dx_b at x.
  Mat second_derivative(int a, int b, const Vec& x) const;

 private:
  int dim_ = 0;
  int level_ = 0;
  bool constant_ = false;
  Fn<double> f0_;
  Fn<D1> f1_;
  Fn<D2> f2_;
};

/// All partial derivatives dP/dx_c at a point of scalar type T, obtained by
/// evaluating P at Dual<T>. Needs level > depth(T); at T = double a level-0
/// field falls back to central differences.
template <class T>
std::vector<MatX<T>> metric_partials(const MetricField& p, const VecX<T>& x) {
  const int n = p.dim();
  std::vector<MatX<T>> out;
  out.reserve(n);
  if (p.level() > dual_depth_v<T>) {
    VecX<Dual<T>> xd(n);
    for (int c = 0; c < n; ++c) {
      for (int k = 0; k < n; ++k) xd(k) = Dual<T>(x(k), T(k == c ? 1.0 : 0.0));
      const MatX<Dual<T>> pd = p.eval_t<Dual<T>>(xd);
      MatX<T> dc(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dc(i, j) = pd(i, j).d;
      out.push_back(std::move(dc));
    }
    return out;
  }
  if constexpr (std::is_same_v<T, double>) {
    for (int c = 0; c < n; ++c) {
      const double h = fd_step(x(c));
      Vec xp = x, xm = x;
      xp(c) += h;
      xm(c) -= h;
      out.push_back((p.eval(xp) - p.eval(xm)) / (2.0 * h));
    }
    return out;
  } else {
    throw Error(ErrorCode::UnsupportedOrder, "metric_partials: metric level too low for dual input");
  }
}

/// Pullback of P by a chart x = chi(u): (dchi^T P(chi(u)) dchi)(u).
MetricField pullback_metric(const MetricField& p, const SmoothMap& chi);

}  // namespace riemobs
