#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace so21 {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

enum class ErrorKind {
  NotOnHyperboloid,
  UnnormalizedGenerator,
  AmbiguousNature,
  InvalidFamilyParams,
  NonMonotoneTime,
  InconsistentNature,
  DriftExceeded,
  GroupViolation,
  InvalidGrid,
  StepBudgetExceeded,
  NonUnitInitialVector,
  NoUnitEigenvalue,
  InvalidU0,
  UncertaintyViolated,
  NegativeVariance,
  NonpositiveAction,
  UnsupportedFamily,
  BadInput,
};

const char* error_name(ErrorKind k);

// Errors that point at bad numerics rather than bad input.
bool is_numerical(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace so21
