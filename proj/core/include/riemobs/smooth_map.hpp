#pragma once

// Type-erased smooth maps R^n -> R^m.
//
// A map built from a generic expression keeps one evaluator per scalar type
// (double, D1, D2, D3) and so supports exact derivatives up to third order.
// Maps built from an opaque double callback only have level 0; their
// derivatives come from central differences with step 1e-5 * (1 + |x_c|).

#include <functional>
#include <string>
#include <vector>

#include "riemobs/linalg.hpp"

namespace riemobs {

inline constexpr double kFdRelStep = 1e-5;

inline double fd_step(double xc) { return kFdRelStep * (1.0 + std::abs(xc)); }

class SmoothMap {
 public:
  template <class T>
  using Fn = std::function<VecX<T>(const VecX<T>&)>;

  SmoothMap() = default;

  /// `f` must be callable as f(const VecX<T>&) -> VecX<T> for every scalar
  /// type up to D3.
  template <class F>
  static SmoothMap from_expression(int in_dim, int out_dim, F f, int level = 3) {
    SmoothMap m;
    m.in_ = in_dim;
    m.out_ = out_dim;
    m.level_ = std::min(level, 3);
    m.f0_ = [f](const Vec& x) -> Vec { return f(x); };
    m.f1_ = [f](const VecX<D1>& x) -> VecX<D1> { return f(x); };
    m.f2_ = [f](const VecX<D2>& x) -> VecX<D2> { return f(x); };
    m.f3_ = [f](const VecX<D3>& x) -> VecX<D3> { return f(x); };
    return m;
  }

  static SmoothMap from_callback(int in_dim, int out_dim, Fn<double> f) {
    SmoothMap m;
    m.in_ = in_dim;
    m.out_ = out_dim;
    m.level_ = 0;
    m.f0_ = std::move(f);
    return m;
  }

  int in_dim() const { return in_; }
  int out_dim() const { return out_; }
  /// Highest dual depth the map can be evaluated at.
  int level() const { return level_; }
  bool empty() const { return !f0_; }

  /// Evaluate at any scalar type up to the map's level.
  template <class T>
  VecX<T> eval_t(const VecX<T>& x) const {
    check_input(x.size());
    constexpr int depth = dual_depth_v<T>;
    if (depth > level_) {
      throw Error(ErrorCode::UnsupportedOrder,
                  "map evaluated at dual depth " + std::to_string(depth) +
                      " but only supports " + std::to_string(level_));
    }
    if constexpr (depth == 0) {
      return f0_(x);
    } else if constexpr (depth == 1) {
      return f1_(x);
    } else if constexpr (depth == 2) {
      return f2_(x);
    } else {
      static_assert(depth == 3, "maps support at most third derivatives");
      return f3_(x);
    }
  }

  Vec eval(const Vec& x) const { return eval_t<double>(x); }
  Mat jacobian(const Vec& x) const;
  /// d^2 map_i / dx dx, symmetric n x n.
  Mat hessian_component(int i, const Vec& x) const;
  std::vector<Mat> hessians(const Vec& x) const;

 private:
  void check_input(Eigen::Index n) const {
    if (n != in_) throw Error(ErrorCode::DimensionMismatch, "map input has wrong dimension");
  }

  int in_ = 0;
  int out_ = 0;
  int level_ = 0;
  Fn<double> f0_;
  Fn<D1> f1_;
  Fn<D2> f2_;
  Fn<D3> f3_;
};

/// Jacobian of `m` at a point whose scalar type is T, computed by lifting
/// to Dual<T>. Falls back to central differences for level-0 maps at T=double.
template <class T>
MatX<T> jacobian_of(const SmoothMap& m, const VecX<T>& x) {
  const int n = m.in_dim();
  MatX<T> jac(m.out_dim(), n);
  if (m.level() > dual_depth_v<T>) {
    VecX<Dual<T>> xd(n);
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) xd(k) = Dual<T>(x(k), T(k == j ? 1.0 : 0.0));
      const VecX<Dual<T>> yd = m.eval_t<Dual<T>>(xd);
      for (int i = 0; i < m.out_dim(); ++i) jac(i, j) = yd(i).d;
    }
    return jac;
  }
  if constexpr (std::is_same_v<T, double>) {
    for (int j = 0; j < n; ++j) {
      const double h = fd_step(x(j));
      Vec xp = x, xm = x;
      xp(j) += h;
      xm(j) -= h;
      jac.col(j) = (m.eval(xp) - m.eval(xm)) / (2.0 * h);
    }
    return jac;
  } else {
    throw Error(ErrorCode::UnsupportedOrder, "jacobian_of: map level too low for dual input");
  }
}

/// Central-difference Jacobian of an arbitrary double function, used as an
/// oracle in tests and as the opaque-callback fallback.
Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x);

/// Convenience for componentwise affine maps x -> A x + b.
SmoothMap affine_map(const Mat& a, const Vec& b);

}  // namespace riemobs
