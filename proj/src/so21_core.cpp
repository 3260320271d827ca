#include "so21osc/so21_core.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace so21 {

const char* error_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotOnHyperboloid: return "NotOnHyperboloid";
    case ErrorKind::UnnormalizedGenerator: return "UnnormalizedGenerator";
    case ErrorKind::AmbiguousNature: return "AmbiguousNature";
    case ErrorKind::InvalidFamilyParams: return "InvalidFamilyParams";
    case ErrorKind::NonMonotoneTime: return "NonMonotoneTime";
    case ErrorKind::InconsistentNature: return "InconsistentNature";
    case ErrorKind::DriftExceeded: return "DriftExceeded";
    case ErrorKind::GroupViolation: return "GroupViolation";
    case ErrorKind::InvalidGrid: return "InvalidGrid";
    case ErrorKind::StepBudgetExceeded: return "StepBudgetExceeded";
    case ErrorKind::NonUnitInitialVector: return "NonUnitInitialVector";
    case ErrorKind::NoUnitEigenvalue: return "NoUnitEigenvalue";
    case ErrorKind::InvalidU0: return "InvalidU0";
    case ErrorKind::UncertaintyViolated: return "UncertaintyViolated";
    case ErrorKind::NegativeVariance: return "NegativeVariance";
    case ErrorKind::NonpositiveAction: return "NonpositiveAction";
    case ErrorKind::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorKind::BadInput: return "BadInput";
  }
  return "Unknown";
}

bool is_numerical(ErrorKind k) {
  switch (k) {
    case ErrorKind::DriftExceeded:
    case ErrorKind::GroupViolation:
    case ErrorKind::StepBudgetExceeded:
    case ErrorKind::NoUnitEigenvalue:
    case ErrorKind::UncertaintyViolated:
    case ErrorKind::NegativeVariance:
      return true;
    default:
      return false;
  }
}

double mdot(const Vec3& a, const Vec3& b) { return a[2] * b[2] - a[0] * b[0] - a[1] * b[1]; }

Vec3 gflip(const Vec3& a) { return {-a[0], -a[1], a[2]}; }

const Mat3& metric() {
  static const Mat3 g = Eigen::Vector3d(-1.0, -1.0, 1.0).asDiagonal();
  return g;
}

bool is_unit_timelike_upper(const Vec3& a, double tol) {
  double scale = std::max(1.0, a.squaredNorm());
  return std::abs(msq(a) - 1.0) <= tol * scale && a[2] > 0.0;
}

Vec3 param_to_vec(const HyperParam& p) {
  double s = std::sinh(p.xi);
  return {s * std::cos(p.phi), s * std::sin(p.phi), std::cosh(p.xi)};
}

ParamResult vec_to_param(const Vec3& v, double tol) {
  if (!is_unit_timelike_upper(v, tol))
    throw Error(ErrorKind::NotOnHyperboloid,
                "v^2 = " + std::to_string(msq(v)) + ", v3 = " + std::to_string(v[2]));
  ParamResult r;
  double rho = std::hypot(v[0], v[1]);
  r.p.xi = std::asinh(rho);
  if (r.p.xi < 1e-12) {
    r.phi_undefined = true;
    r.p.phi = 0.0;
  } else {
    r.p.phi = wrap_angle(std::atan2(v[1], v[0]));
  }
  return r;
}

namespace {

// [a]_x with [a]_x k = a x k.
Mat3 cross_matrix(const Vec3& a) {
  Mat3 m;
  m << 0.0, -a[2], a[1],
       a[2], 0.0, -a[0],
       -a[1], a[0], 0.0;
  return m;
}

int generator_class(const Vec3& b, double tol) {
  double s = msq(b);
  if (std::abs(s - 1.0) <= tol) return 1;
  if (std::abs(s + 1.0) <= tol) return -1;
  if (std::abs(s) <= tol) return 0;
  throw Error(ErrorKind::UnnormalizedGenerator, "b^2 = " + std::to_string(s));
}

}  // namespace

Mat3 adjoint_rep(double xi, const Vec3& b, double tol) {
  const int cls = generator_class(b, tol);
  const Mat3& g = metric();
  Mat3 D = cross_matrix(g * b) * g;
  Mat3 P = b * b.transpose() * g;
  Mat3 I = Mat3::Identity();
  switch (cls) {
    case 1: return (I - P) * std::cos(xi) + D * std::sin(xi) + P;
    case -1: return (I + P) * std::cosh(xi) + D * std::sinh(xi) - P;
    default: return I + xi * D + 0.5 * xi * xi * P;
  }
}

Mat2 quad_rep(double xi, const Vec3& b, double tol) {
  const int cls = generator_class(b, tol);
  Mat2 C;
  C << -b[1], -(b[0] + b[2]),
       b[2] - b[0], b[1];
  C *= 0.5;
  Mat2 I = Mat2::Identity();
  switch (cls) {
    case 1: return std::cos(0.5 * xi) * I + 2.0 * std::sin(0.5 * xi) * C;
    case -1: return std::cosh(0.5 * xi) * I + 2.0 * std::sinh(0.5 * xi) * C;
    default: return I + xi * C;
  }
}

Mat3 trace_map(const Mat2& eq) {
  static const std::array<Mat2, 3> J = [] {
    std::array<Mat2, 3> j;
    j[0] << 1.0, 0.0, 0.0, -1.0;
    j[1] << 0.0, -1.0, -1.0, 0.0;
    j[2] = Mat2::Identity();
    return j;
  }();
  Mat3 E;
  for (int i = 0; i < 3; ++i) {
    Mat2 left = eq.transpose() * J[i] * eq;
    for (int k = 0; k < 3; ++k) E(i, k) = 0.5 * (left * J[k]).trace();
  }
  return E;
}

double group_violation(const Mat3& E) {
  const Mat3& g = metric();
  return max_abs(E.transpose() * g * E - g);
}

bool is_so21(const Mat3& E, double tol) {
  return group_violation(E) <= tol && std::abs(E.determinant() - 1.0) <= tol;
}

Mat3 vector_generator(double omega, const Vec3& n) {
  return -2.0 * omega * cross_matrix(gflip(n)) * metric();
}

Mat2 quad_generator(double omega, const Vec3& n) {
  Mat2 B;
  B << n[1], n[0] + n[2],
       n[0] - n[2], -n[1];
  return omega * B;
}

double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(a, two_pi);
  if (r <= -std::numbers::pi) r += two_pi;
  if (r > std::numbers::pi) r -= two_pi;
  return r;
}

}  // namespace so21
