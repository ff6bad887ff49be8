#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace riemobs {

enum class ErrorCode {
  SingularMetric,
  SingularMatrix,
  SingularBlock,
  SingularJacobian,
  RankDeficientOutput,
  RankViolation,
  DimensionMismatch,
  LeftRegion,
  StepFailure,
  NoConvergence,
  NoFeasiblePoint,
  InsufficientSamples,
  UnsupportedQ,
  NonpositiveWeight,
  UnsupportedOrder,
  PreconditionViolation,
  ConfigError,
  MissingArtifacts,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. `point` carries the state where the
/// failure was detected when there is one; `residual` is set by solvers.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  Error(ErrorCode code, const std::string& what, Eigen::VectorXd point, double residual = 0.0)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        point_(std::move(point)),
        residual_(residual) {}

  ErrorCode code() const noexcept { return code_; }
  const Eigen::VectorXd& point() const noexcept { return point_; }
  double residual() const noexcept { return residual_; }

 private:
  ErrorCode code_;
  Eigen::VectorXd point_;
  double residual_ = 0.0;
};

}  // namespace riemobs
