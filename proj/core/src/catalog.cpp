#include "riemobs/catalog.hpp"

#include <cmath>

namespace riemobs {

namespace {

SmoothMap first_coordinate(int n) {
  return SmoothMap::from_expression(n, 1, [](const auto& x) {
    using T = ScalarOf<decltype(x)>;
    VecX<T> out(1);
    out(0) = x(0);
    return out;
  });
}

}  // namespace

const NamedMetric& BenchmarkSpec::metric(const std::string& metric_name) const {
  for (const auto& m : metrics)
    if (m.name == metric_name) return m;
  std::string known;
  for (const auto& m : metrics) known += (known.empty() ? "" : ", ") + m.name;
  throw Error(ErrorCode::ConfigError,
              "benchmark '" + name + "' has no metric '" + metric_name + "' (known: " + known + ")");
}

std::optional<Verdict> BenchmarkSpec::expectation(const std::string& metric_name,
                                                  const std::string& condition) const {
  for (const auto& e : expected)
    if (e.metric == metric_name && e.condition == condition) return e.verdict;
  return std::nullopt;
}

// ---- linear ---------------------------------------------------------------

Mat detectability_metric(const Mat& a, const Mat& h, double q, double sigma) {
  const Eigen::Index n = a.rows();
  const Mat shifted = a + 0.5 * q * Mat::Identity(n, n);
  return solve_lyapunov(shifted, sigma * h.transpose() * h);
}

BenchmarkSpec linear_quadratic(const Mat& a, const Mat& h, const Mat& p, const Mat& q) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || h.cols() != n || p.rows() != n || p.cols() != n || q.rows() != h.rows() ||
      q.cols() != h.rows() || h.rows() < 1 || h.rows() > n) {
    throw Error(ErrorCode::DimensionMismatch, "linear_quadratic: inconsistent dimensions");
  }
  if (!cholesky_spd(p) || !cholesky_spd(q)) {
    throw Error(ErrorCode::SingularMetric, "linear_quadratic: P and Q must be positive definite");
  }
  BenchmarkSpec s;
  s.name = "linear";
  s.citation = "linear-quadratic family";
  s.model.name = "linear";
  s.model.f = affine_map(a, Vec::Zero(n));
  s.model.h = affine_map(h, Vec::Zero(h.rows()));
  s.model.region = Region::box(Vec::Constant(n, -2.0), Vec::Constant(n, 2.0), "box[-2,2]");
  s.model.validate();
  s.q = MetricField::constant(q);
  s.gap = gap_sq_distance(s.q);
  s.metrics.push_back({"const", MetricField::constant(p), kDefaultQMin, "constant metric"});

  // kernel-restricted Lyapunov margin, exact for a constant metric
  const Mat ker = null_space(h);
  double margin = std::numeric_limits<double>::infinity();
  if (ker.cols() > 0) {
    const Mat lf = a.transpose() * p + p * a;
    margin = -max_generalized_eigen(Mat(ker.transpose() * lf * ker), Mat(ker.transpose() * p * ker)).first;
  }
  s.params["q_kernel"] = margin;
  s.expected = {
      {"const", "a2", margin >= kDefaultQMin ? Verdict::Pass : Verdict::Fail},
      {"const", "a3-nullity", Verdict::Pass},
      {"const", "a3-direct", Verdict::Pass},
  };
  s.sim.x0 = Vec::Constant(n, 0.5);
  s.sim.xhat0 = Vec::Constant(n, -0.5);
  s.sim.dt = 0.01;
  s.sim.horizon = 10.0;
  s.sim.sample_every = 10;
  s.sim.rate = std::isfinite(margin) && margin > 0.0 ? margin / 4.0 : 0.0;
  return s;
}

BenchmarkSpec linear_default(double q) {
  Mat a(2, 2);
  a << 0.0, 1.0, 0.0, 0.0;
  Mat h(1, 2);
  h << 1.0, 0.0;
  const Mat p = detectability_metric(a, h, q);
  BenchmarkSpec s = linear_quadratic(a, h, p, Mat::Identity(1, 1));
  s.params["q"] = q;
  s.sim.x0 = Vec::Zero(2);
  s.sim.x0 << 1.0, 0.0;
  s.sim.xhat0 = Vec::Zero(2);
  s.sim.xhat0 << 0.5, 0.3;
  s.sim.horizon = 16.0;
  return s;
}

// ---- harmonic oscillator --------------------------------------------------

Region oscillator_region(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(ErrorCode::PreconditionViolation, "oscillator region needs 0 < epsilon < 1");
  }
  Vec lo(3), hi(3);
  lo << -1.0 / epsilon, -1.0 / std::sqrt(epsilon), epsilon;
  hi << 1.0 / epsilon, 1.0 / std::sqrt(epsilon), 1.0 / epsilon;
  Region r = Region::box(lo, hi, "omega_eps");
  r.member = [epsilon](const Vec& x) {
    const double v = x(2) * x(0) * x(0) + x(1) * x(1);
    return v > epsilon && v < 1.0 / epsilon && x(2) > epsilon && x(2) < 1.0 / epsilon;
  };
  return r;
}

SmoothMap oscillator_drift() {
  return SmoothMap::from_expression(3, 3, [](const auto& x) {
    using T = ScalarOf<decltype(x)>;
    VecX<T> out(3);
    out(0) = x(1);
    out(1) = -x(0) * x(2);
    out(2) = T(0.0);
    return out;
  });
}

MetricField sandwich_metric(const Mat& weight) {
  if (weight.rows() != 4 || weight.cols() != 4 || !cholesky_spd(weight)) {
    throw Error(ErrorCode::SingularMetric, "sandwich weight must be a 4x4 SPD matrix");
  }
  return MetricField::from_expression(3, [weight](const auto& x) {
    using T = ScalarOf<decltype(x)>;
    MatX<T> m = MatX<T>::Zero(4, 3);
    m(0, 0) = T(1.0);
    m(1, 1) = T(1.0);
    m(2, 0) = -x(2);
    m(2, 2) = -x(0);
    m(3, 1) = -x(2);
    m(3, 2) = -x(1);
    return symmetrize<T>(MatX<T>(m.transpose() * weight.cast<T>() * m));
  });
}

Mat sandwich_high_gain_weight(double gain_scale) {
  Mat a = Mat::Zero(4, 4);
  a(0, 1) = a(1, 2) = a(2, 3) = 1.0;
  Mat c = Mat::Zero(1, 4);
  c(0, 0) = 1.0;
  Vec k(4);
  k << 4.0, 6.0, 4.0, 1.0;
  const Mat acl = a - k * c;
  const Mat p0 = solve_lyapunov(acl, -Mat::Identity(4, 4));
  Vec d(4);
  for (int i = 0; i < 4; ++i) d(i) = std::pow(gain_scale, -i);
  return symmetrize<double>(Mat(d.asDiagonal() * p0 * d.asDiagonal()));
}

Ex8Ingredients ex8_ingredients(const Ex8Parameters& prm) {
  const double a = prm.a, ab = prm.a * prm.b;
  Ex8Ingredients ing;
  ing.h = first_coordinate(3);
  ing.ortho.h_perp = SmoothMap::from_expression(3, 2, [ab](const auto& x) {
    using T = ScalarOf<decltype(x)>;
    VecX<T> out(2);
    out(0) = x(1) - x(0);
    out(1) = x(2) + T(0.5) * x(0) * x(0) + T(ab) * x(0) * x(1);
    return out;
  });
  ing.ortho.r = MetricField::from_expression(2, [a](const auto& xi) {
    using T = ScalarOf<decltype(xi)>;
    MatX<T> r = MatX<T>::Zero(2, 2);
    r(0, 0) = T(1.0);
    r(1, 1) = T(1.0) + T(a) * xi(0) * xi(0);
    return r;
  });
  ing.ortho.declared_rank = 2;
  ing.q = MetricField::constant(Mat::Constant(1, 1, prm.c));
  return ing;
}

MetricField ex8_closed_form_metric(const Ex8Parameters& prm) {
  const double a = prm.a, ab = prm.a * prm.b, c = prm.c;
  return MetricField::from_expression(3, [a, ab, c](const auto& x) {
    using T = ScalarOf<decltype(x)>;
    const T y = x(0), za = x(1);
    MatX<T> m(2, 3);
    m(0, 0) = T(-1.0);
    m(0, 1) = T(1.0);
    m(0, 2) = T(0.0);
    m(1, 0) = y + T(ab) * za;
    m(1, 1) = T(ab) * y;
    m(1, 2) = T(1.0);
    MatX<T> w = MatX<T>::Zero(2, 2);
    w(0, 0) = T(1.0);
    w(1, 1) = T(1.0) + T(a) * (za - y) * (za - y);
    MatX<T> p = m.transpose() * w * m;
    p(0, 0) += T(c);
    return symmetrize<T>(p);
  });
}

SmoothMap ex8_inverse_chart(const Ex8Parameters& prm) {
  const double ab = prm.a * prm.b;
  return SmoothMap::from_expression(3, 3, [ab](const auto& u) {
    using T = ScalarOf<decltype(u)>;
    VecX<T> x(3);
    const T y = u(0);
    const T za = u(1) + y;
    x(0) = y;
    x(1) = za;
    x(2) = u(2) - T(0.5) * y * y - T(ab) * y * za;
    return x;
  });
}

Vec ex8_explicit_observer(const Ex8Parameters& prm, double gain, const Vec& xhat, double y) {
  const double yh = xhat(0), zah = xhat(1), zbh = xhat(2);
  const double ab = prm.a * prm.b;
  Vec f(3);
  f << zah, -yh * zbh, 0.0;
  Vec dir(3);
  dir << 1.0, 1.0, -yh - ab * (zah + yh);
  return f - gain / prm.c * dir * (yh - y);
}

BenchmarkSpec harmonic_oscillator(double epsilon, const OscillatorOptions& opts) {
  const Ex8Parameters prm = tune_ex8_parameters(epsilon, opts.c);
  BenchmarkSpec s;
  s.name = "oscillator";
  s.citation = "harmonic oscillator with unknown frequency";
  s.model.name = "oscillator";
  s.model.f = oscillator_drift();
  s.model.h = first_coordinate(3);
  s.model.region = oscillator_region(epsilon);
  s.model.validate();

  const Ex8Ingredients ing = ex8_ingredients(prm);
  s.q = ing.q;
  s.gap = gap_sq_distance(s.q);
  const ConstructedMetric built = build_product_metric(ing.q, ing.ortho, ing.h, &s.model.region);

  const Mat weight = opts.sandwich_weight.value_or(sandwich_high_gain_weight());
  s.metrics.push_back({"sandwich", sandwich_metric(weight), kDefaultQMin, "sandwich metric, designed weight"});
  s.metrics.push_back({"sandwich-identity", sandwich_metric(Mat::Identity(4, 4)), kDefaultQMin,
                       "sandwich metric, identity weight"});
  s.metrics.push_back({"ex8", built.metric, prm.q, "product metric from the recipe"});
  s.metrics.push_back({"ex8-closed", ex8_closed_form_metric(prm), prm.q, "product metric, closed form"});

  s.params = {{"epsilon", epsilon}, {"a", prm.a}, {"b", prm.b}, {"c", prm.c},
              {"q", prm.q},         {"q_sup", prm.q_sup}, {"a_exponent", prm.a_exponent}};
  s.expected = {
      {"sandwich", "a2", Verdict::Pass},
      {"sandwich", "a3-nullity", Verdict::Fail},
      {"sandwich-identity", "a2", Verdict::Fail},
      {"sandwich-identity", "a3-nullity", Verdict::Fail},
      {"sandwich-identity", "a3-direct", Verdict::Fail},
      {"ex8", "a2", Verdict::Pass},
      {"ex8", "a3-nullity", Verdict::Pass},
      {"ex8", "a3-direct", Verdict::Pass},
      {"ex8", "submersion", Verdict::Pass},
      {"ex8-closed", "a2", Verdict::Pass},
      {"ex8-closed", "a3-nullity", Verdict::Pass},
      {"ex8-closed", "submersion", Verdict::Pass},
  };
  s.sim.x0 = Vec(3);
  s.sim.x0 << 1.0, 0.0, 1.0;
  s.sim.xhat0 = Vec(3);
  s.sim.xhat0 << 1.1, -0.1, 1.05;
  s.sim.dt = 0.01;
  s.sim.horizon = 10.0;
  s.sim.sample_every = 10;
  s.sim.basin = 1.0;
  s.sim.rate = prm.q / 4.0;
  return s;
}

// ---- planar ---------------------------------------------------------------

SmoothMap planar_h_perp(const PlanarSpec& s) {
  // b depends on y only, so int_0^y b(s) ds is its y-antiderivative.
  const Polynomial hp = s.b.antiderivative(0) + s.a.antiderivative(1);
  return SmoothMap::from_expression(2, 1, [hp](const auto& x) {
    using T = ScalarOf<decltype(x)>;
    VecX<T> out(1);
    out(0) = hp.eval<T>(x);
    return out;
  });
}

double planar_tune_b() {
  double best_b = 0.0, best_q = -std::numeric_limits<double>::infinity();
  for (int k = -8; k <= 8; ++k) {
    const double b = 0.25 * k;
    // P = e1 e1^T + (b, 1)(b, 1)^T; its condition number depends on b only.
    Mat p(2, 2);
    p << 1.0 + b * b, b, b, 1.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(p);
    const double cond = es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
    if (cond > 10.0) continue;
    // 2 a dg/dz <= -q a^2 with g = b z + (-z - y), a = 1
    const double q = -2.0 * (b - 1.0);
    if (q > best_q) {
      best_q = q;
      best_b = b;
    }
  }
  return best_b;
}

BenchmarkSpec planar_family(const PlanarSpec& ps, const std::string& name) {
  for (const auto& t : ps.b.terms()) {
    if (t.exponents.size() > 1 && t.exponents[1] != 0) {
      throw Error(ErrorCode::PreconditionViolation, "planar family: b must depend on y only");
    }
  }
  BenchmarkSpec s;
  s.name = name;
  s.citation = "two-dimensional systems with scalar output";
  s.model.name = name;
  const PlanarSpec cp = ps;
  s.model.f = SmoothMap::from_expression(2, 2, [cp](const auto& x) {
    using T = ScalarOf<decltype(x)>;
    VecX<T> out(2);
    out(0) = cp.f_y.eval<T>(x);
    out(1) = cp.f_z.eval<T>(x);
    return out;
  });
  s.model.h = first_coordinate(2);
  s.model.region = Region::box(Vec::Constant(2, -2.0), Vec::Constant(2, 2.0), "box[-2,2]");
  s.model.validate();
  for (const Vec& x : s.model.region.sample(0, 512)) {
    if (!(ps.a.eval<double>(x) > 0.0)) throw Error(ErrorCode::NonpositiveWeight, "a(y, z) <= 0", x);
  }
  s.q = MetricField::constant(Mat::Identity(1, 1));
  s.gap = gap_sq_distance(s.q);
  OrthComplementMap ortho;
  ortho.h_perp = planar_h_perp(ps);
  ortho.r = MetricField::constant(Mat::Identity(1, 1));
  ortho.declared_rank = 1;
  const ConstructedMetric built = build_product_metric(s.q, ortho, s.model.h, &s.model.region);
  s.metrics.push_back({"product", built.metric, kDefaultQMin, "rank-one plus output metric"});
  s.expected = {
      {"product", "a3-nullity", Verdict::Pass},
      {"product", "submersion", Verdict::Pass},
  };
  s.sim.x0 = Vec(2);
  s.sim.x0 << 1.0, 0.0;
  s.sim.xhat0 = Vec(2);
  s.sim.xhat0 << 0.8, 0.4;
  s.sim.dt = 0.01;
  s.sim.horizon = 8.0;
  s.sim.sample_every = 10;
  return s;
}

BenchmarkSpec planar_default() {
  const double b = planar_tune_b();
  PlanarSpec ps;
  ps.f_y = Polynomial::variable(2, 1);
  ps.f_z = (Polynomial::variable(2, 1) + Polynomial::variable(2, 0)) * -1.0;
  ps.a = Polynomial::constant(2, 1.0);
  ps.b = Polynomial::constant(2, b);
  BenchmarkSpec s = planar_family(ps);
  const double q = -2.0 * (b - 1.0);
  s.params = {{"b", b}, {"a", 1.0}, {"q", q}};
  s.expected.push_back({"product", "a2", Verdict::Pass});
  s.expected.push_back({"product", "a3-direct", Verdict::Pass});
  s.sim.rate = q / 4.0;
  return s;
}

// ---- circle ---------------------------------------------------------------

double circle_rank_lhs(const SmoothMap& k, const Vec& x) {
  const Vec kv = k.eval(x);
  const Mat j = k.jacobian(x);
  const double ka = kv(0), kb = kv(1);
  return x(0) * (kb * j(0, 1) - ka * j(1, 1)) - x(1) * (kb * j(0, 0) - ka * j(1, 0));
}

BenchmarkSpec circle_output(const SmoothMap& k, const std::optional<MetricField>& r) {
  if (k.in_dim() != 2 || k.out_dim() != 2) throw Error(ErrorCode::DimensionMismatch, "k must map R^2 to R^2");
  BenchmarkSpec s;
  s.name = "circle";
  s.citation = "squared-radius output on the punctured plane";
  s.model.name = "circle";
  s.model.f = SmoothMap::from_expression(2, 2, [](const auto& x) {
    using T = ScalarOf<decltype(x)>;
    VecX<T> out(2);
    out(0) = -x(1);
    out(1) = x(0);
    return out;
  });
  s.model.h = SmoothMap::from_expression(2, 1, [](const auto& x) {
    using T = ScalarOf<decltype(x)>;
    VecX<T> out(1);
    out(0) = x(0) * x(0) + x(1) * x(1);
    return out;
  });
  s.model.region = Region::box(Vec::Constant(2, -5.0), Vec::Constant(2, 5.0), "annulus[0.2,5]");
  s.model.region.member = [](const Vec& x) {
    const double rad = x.norm();
    return rad >= 0.2 && rad <= 5.0;
  };
  s.model.validate();
  for (const Vec& x : s.model.region.sample(0, 512)) {
    const double v = circle_rank_lhs(k, x);
    if (!(std::abs(v) > 1e-10 * (1.0 + x.squaredNorm()))) {
      throw Error(ErrorCode::RankViolation, "rank-2 condition fails for the chosen k", x);
    }
  }
  s.q = MetricField::constant(Mat::Identity(1, 1));
  s.gap = gap_sq_distance(s.q);
  OrthComplementMap ortho;
  const SmoothMap kk = k;
  ortho.h_perp = SmoothMap::from_expression(
      2, 2,
      [kk](const auto& x) {
        using T = ScalarOf<decltype(x)>;
        using std::sqrt;
        const VecX<T> kv = kk.eval_t<T>(x);
        const T nrm = sqrt(kv(0) * kv(0) + kv(1) * kv(1));
        VecX<T> out(2);
        out(0) = kv(0) / nrm;
        out(1) = kv(1) / nrm;
        return out;
      },
      k.level());
  ortho.r = r.value_or(MetricField::constant(Mat::Identity(2, 2)));
  ortho.declared_rank = 1;
  const ConstructedMetric built = build_product_metric(s.q, ortho, s.model.h, &s.model.region);
  s.metrics.push_back({"product", built.metric, kDefaultQMin, "pullback of Q + R through (h, k/|k|)"});
  s.expected = {
      {"product", "a3-nullity", Verdict::Pass},
      {"product", "submersion", Verdict::Pass},
  };
  s.sim.x0 = Vec(2);
  s.sim.x0 << 1.0, 0.0;
  s.sim.xhat0 = Vec(2);
  s.sim.xhat0 << 1.2, 0.1;
  return s;
}

BenchmarkSpec circle_default() { return circle_output(affine_map(Mat::Identity(2, 2), Vec::Zero(2))); }

std::vector<std::string> benchmark_names() { return {"linear", "oscillator", "planar", "circle"}; }

BenchmarkSpec make_benchmark(const std::string& name, double epsilon) {
  if (name == "linear") return linear_default();
  if (name == "oscillator") return harmonic_oscillator(epsilon);
  if (name == "planar") return planar_default();
  if (name == "circle") return circle_default();
  throw Error(ErrorCode::ConfigError, "unknown benchmark '" + name + "'");
}

}  // namespace riemobs
