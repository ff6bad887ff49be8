#include "riemobs/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace riemobs {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularMetric: return "SingularMetric";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::SingularBlock: return "SingularBlock";
    case ErrorCode::SingularJacobian: return "SingularJacobian";
    case ErrorCode::RankDeficientOutput: return "RankDeficientOutput";
    case ErrorCode::RankViolation: return "RankViolation";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::LeftRegion: return "LeftRegion";
    case ErrorCode::StepFailure: return "StepFailure";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NoFeasiblePoint: return "NoFeasiblePoint";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::UnsupportedQ: return "UnsupportedQ";
    case ErrorCode::NonpositiveWeight: return "NonpositiveWeight";
    case ErrorCode::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorCode::PreconditionViolation: return "PreconditionViolation";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::MissingArtifacts: return "MissingArtifacts";
  }
  return "Unknown";
}

std::optional<Mat> cholesky_spd(const Mat& p) {
  const Eigen::Index n = p.rows();
  if (n == 0 || p.cols() != n) return std::nullopt;
  const double trace = p.trace();
  if (!(trace > 0.0) || !std::isfinite(trace)) return std::nullopt;
  const double pivot_tol = 1e-12 * trace / static_cast<double>(n);
  Mat l = Mat::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double diag = p(j, j);
    for (Eigen::Index k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > pivot_tol)) return std::nullopt;
    const double ljj = std::sqrt(diag);
    l(j, j) = ljj;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double acc = p(i, j);
      for (Eigen::Index k = 0; k < j; ++k) acc -= l(i, k) * l(j, k);
      l(i, j) = acc / ljj;
    }
  }
  return l;
}

Mat cholesky_or_throw(const Mat& p, const Vec& at) {
  auto l = cholesky_spd(p);
  if (!l) throw Error(ErrorCode::SingularMetric, "metric is not positive definite", at);
  return *l;
}

Mat cholesky_solve(const Mat& lower, const Mat& b) {
  Mat y = lower.triangularView<Eigen::Lower>().solve(b);
  return lower.transpose().triangularView<Eigen::Upper>().solve(y);
}

int numerical_rank(const Mat& a, double rel_tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++rank;
  return rank;
}

Mat null_space(const Mat& a, double rel_tol) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(0) > 0.0 && s(i) > rel_tol * s(0)) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

std::pair<double, Vec> max_generalized_eigen(const Mat& a, const Mat& b) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> solver(a, b);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::SingularMetric, "generalised eigenproblem failed");
  }
  const Eigen::Index last = a.rows() - 1;
  return {solver.eigenvalues()(last), solver.eigenvectors().col(last)};
}

double max_principal_angle(const Mat& a, const Mat& b) {
  Eigen::HouseholderQR<Mat> qa(a), qb(b);
  const Mat ua = qa.householderQ() * Mat::Identity(a.rows(), a.cols());
  const Mat ub = qb.householderQ() * Mat::Identity(b.rows(), b.cols());
  // sine form: acos of the cosines loses half the digits near zero
  const Mat resid = ub - ua * (ua.transpose() * ub);
  Eigen::JacobiSVD<Mat> svd(resid);
  const auto& s = svd.singularValues();
  const double largest = s.size() == 0 ? 0.0 : std::min(s(0), 1.0);
  return std::asin(largest);
}

}  // namespace riemobs
