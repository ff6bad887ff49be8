#pragma once

#include <limits>
#include <numeric>
#include <queue>
#include <random>

#include <riemobs/riemobs.hpp>

namespace riemobs::testing {

inline Vec random_vec(std::mt19937_64& rng, int n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

inline Mat random_spd(std::mt19937_64& rng, int n, double shift = 0.5) {
  Mat a(n, n);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = g(rng);
  return a * a.transpose() + shift * Mat::Identity(n, n);
}

/// diag(1, 1 + a x_0^2) on R^2.
inline MetricField warped_plane(double a) {
  return MetricField::from_expression(2, [a](const auto& x) {
    using T = ScalarOf<decltype(x)>;
    MatX<T> p = MatX<T>::Zero(2, 2);
    p(0, 0) = T(1.0);
    p(1, 1) = T(1.0) + a * x(0) * x(0);
    return p;
  });
}

/// diag(c, 1, 1 + a xi_a^2) in (y, xi_a, xi_b).
inline MetricField ex8_chart_metric(double a, double c) {
  return MetricField::from_expression(3, [a, c](const auto& x) {
    using T = ScalarOf<decltype(x)>;
    MatX<T> p = MatX<T>::Zero(3, 3);
    p(0, 0) = T(c);
    p(1, 1) = T(1.0);
    p(2, 2) = T(1.0) + a * x(1) * x(1);
    return p;
  });
}

/// A non-diagonal, non-constant SPD metric on R^2 for generic checks.
inline MetricField skew_metric() {
  return MetricField::from_expression(2, [](const auto& x) {
    using T = ScalarOf<decltype(x)>;
    using std::cos;
    using std::sin;
    MatX<T> p(2, 2);
    p(0, 0) = T(2.0) + sin(x(0)) * T(0.5) + x(1) * x(1) * T(0.2);
    p(0, 1) = T(0.3) * x(0) * x(1);
    p(1, 0) = p(0, 1);
    p(1, 1) = T(1.5) + T(0.4) * cos(x(0) + x(1));
    return p;
  });
}

/// Wraps a metric as an opaque callback so its derivatives come from
/// central differences only.
inline MetricField opaque(const MetricField& p) {
  return MetricField::from_callback(p.dim(), [p](const Vec& x) { return p.eval(x); });
}

// x_bar = B v(x) + c0 with v_i = (exp(beta x_i) - 1) / beta.
struct ExpChart {
  Mat b;
  Vec c0;
  double beta;

  SmoothMap forward() const {
    const Mat bb = b;
    const Vec cc = c0;
    const double be = beta;
    return SmoothMap::from_expression(static_cast<int>(b.cols()), static_cast<int>(b.rows()), [bb, cc, be](const auto& x) {
      using T = ScalarOf<decltype(x)>;
      using std::exp;
      VecX<T> v(x.size());
      for (Eigen::Index i = 0; i < x.size(); ++i) v(i) = (exp(be * x(i)) - T(1.0)) / be;
      VecX<T> out(bb.rows());
      for (Eigen::Index r = 0; r < bb.rows(); ++r) {
        out(r) = T(cc(r));
        for (Eigen::Index i = 0; i < x.size(); ++i) out(r) += bb(r, i) * v(i);
      }
      return out;
    });
  }

  SmoothMap inverse() const {
    const Mat binv = b.inverse();
    const Vec cc = c0;
    const double be = beta;
    return SmoothMap::from_expression(static_cast<int>(b.rows()), static_cast<int>(b.cols()), [binv, cc, be](const auto& xb) {
      using T = ScalarOf<decltype(xb)>;
      using std::log;
      VecX<T> out(binv.rows());
      for (Eigen::Index r = 0; r < binv.rows(); ++r) {
        T u(0.0);
        for (Eigen::Index i = 0; i < xb.size(); ++i) u += binv(r, i) * (xb(i) - cc(i));
        out(r) = log(T(1.0) + be * u) / be;
      }
      return out;
    });
  }
};

inline ExpChart random_chart(std::mt19937_64& rng, int n) {
  ExpChart c;
  c.b = Mat::Identity(n, n) + 0.3 * (random_spd(rng, n, 0.0) / n);
  c.c0 = random_vec(rng, n, -0.5, 0.5);
  c.beta = std::uniform_real_distribution<double>(0.1, 0.4)(rng);
  return c;
}

inline SmoothMap compose(const SmoothMap& outer, const SmoothMap& inner) {
  return SmoothMap::from_expression(
      inner.in_dim(), outer.out_dim(),
      [outer, inner](const auto& x) {
        using T = ScalarOf<decltype(x)>;
        return outer.eval_t<T>(inner.eval_t<T>(x));
      },
      std::min(outer.level(), inner.level()));
}

// Shortest path on a grid graph over [-1, 1]^2 with spacing h. Edges join
// nodes whose offset (i, j) has |i|, |j| <= radius and gcd 1; each edge is
// weighted by Simpson's rule on sqrt(d^T P d).
inline double dijkstra_distance(const MetricField& p, const Vec& from, const Vec& to, double h, int radius) {
  const int side = static_cast<int>(std::lround(2.0 / h)) + 1;
  auto node_of = [&](const Vec& x) {
    const int i = static_cast<int>(std::lround((x(0) + 1.0) / h));
    const int j = static_cast<int>(std::lround((x(1) + 1.0) / h));
    return i * side + j;
  };
  auto point_of = [&](int i, int j) {
    Vec x(2);
    x << -1.0 + i * h, -1.0 + j * h;
    return x;
  };
  std::vector<std::pair<int, int>> offsets;
  for (int di = -radius; di <= radius; ++di)
    for (int dj = -radius; dj <= radius; ++dj)
      if ((di != 0 || dj != 0) && std::gcd(std::abs(di), std::abs(dj)) == 1) offsets.emplace_back(di, dj);
  std::vector<double> dist(static_cast<std::size_t>(side) * side, std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  const int target = node_of(to);
  dist[node_of(from)] = 0.0;
  open.emplace(0.0, node_of(from));
  while (!open.empty()) {
    const auto [d, node] = open.top();
    open.pop();
    if (d > dist[node]) continue;
    if (node == target) return d;
    const int i = node / side, j = node % side;
    const Vec x = point_of(i, j);
    for (const auto& [di, dj] : offsets) {
      const int ni = i + di, nj = j + dj;
      if (ni < 0 || nj < 0 || ni >= side || nj >= side) continue;
      const Vec y = point_of(ni, nj);
      const Vec dx = y - x;
      auto speed = [&](const Vec& at) { return std::sqrt(dx.dot(p.eval(at) * dx)); };
      const double w = (speed(x) + 4.0 * speed(0.5 * (x + y)) + speed(y)) / 6.0;
      const int next = ni * side + nj;
      if (d + w < dist[next]) {
        dist[next] = d + w;
        open.emplace(d + w, next);
      }
    }
  }
  return dist[target];
}

// Largest relative mismatch between II moved by transform_sff and II
// recomputed from the pulled-back data, over random exp-type chart pairs.
inline double sff_tensoriality_error(const BenchmarkSpec& bench, const MetricField& p, std::uint64_t seed,
                                     int trials) {
  std::mt19937_64 rng(seed);
  const int n = bench.model.n(), m = bench.model.p();
  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    const ExpChart phi = random_chart(rng, n);
    const ExpChart psi = random_chart(rng, m);
    const SmoothMap phi_inv = phi.inverse(), psi_inv = psi.inverse();
    const MetricField p_bar = pullback_metric(p, phi_inv);
    const MetricField q_bar = pullback_metric(bench.q, psi_inv);
    const SmoothMap h_bar = compose(psi.forward(), compose(bench.model.h, phi_inv));
    const Vec x = bench.model.region.sample(seed + trial, 1).front();
    const Vec x_bar = phi.forward().eval(x);
    const auto ii = second_fundamental_form(p, bench.q, bench.model.h, x);
    const auto ii_bar = second_fundamental_form(p_bar, q_bar, h_bar, x_bar);
    const auto moved = transform_sff(phi.forward().jacobian(x), psi.forward().jacobian(bench.model.h.eval(x)), ii);
    for (std::size_t k = 0; k < ii_bar.size(); ++k) {
      worst = std::max(worst, (moved[k] - ii_bar[k]).norm() / (1.0 + ii_bar[k].norm()));
    }
  }
  return worst;
}

// Worst |d^2/ds^2 h(gamma(s)) - v^T Hess h v| at s = 0 over random short
// geodesics, the second derivative taken by central differences.
inline double hessian_geodesic_error(const MetricField& p, const SmoothMap& h, std::mt19937_64& rng, int count) {
  double worst = 0.0;
  const int n = p.dim();
  for (int k = 0; k < count; ++k) {
    const Vec x0 = random_vec(rng, n);
    const Vec v0 = random_vec(rng, n);
    const double ds = 1e-3;
    const Vec fwd = geodesic_ivp(p, x0, v0, ds, ds / 4).end();
    const Vec back = geodesic_ivp(p, x0, -v0, ds, ds / 4).end();
    const Mat hess = riemannian_hessian(p, h, x0)[0];
    const double second = (h.eval(fwd)(0) + h.eval(back)(0) - 2.0 * h.eval(x0)(0)) / (ds * ds);
    worst = std::max(worst, std::abs(second - v0.dot(hess * v0)));
  }
  return worst;
}

}  // namespace riemobs::testing
