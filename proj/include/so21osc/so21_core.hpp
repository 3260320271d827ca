#pragma once

#include "so21osc/types.hpp"

namespace so21 {

inline constexpr double kTol = 1e-9;

/// Minkowski pairing a3*b3 - a1*b1 - a2*b2.
double mdot(const Vec3& a, const Vec3& b);
inline double msq(const Vec3& a) { return mdot(a, a); }

/// a^g: flips the first two components.
Vec3 gflip(const Vec3& a);
const Mat3& metric();

/// |a^2 - 1| <= tol * max(1, |a|^2) and a3 > 0.
bool is_unit_timelike_upper(const Vec3& a, double tol = kTol);

struct HyperParam {
  double xi = 0.0;
  double phi = 0.0;
};

struct ParamResult {
  HyperParam p;
  bool phi_undefined = false;
};

Vec3 param_to_vec(const HyperParam& p);
/// Inverse of param_to_vec; phi in (-pi, pi]. Throws NotOnHyperboloid.
ParamResult vec_to_param(const Vec3& v, double tol = kTol);

/// 3x3 matrix M with Q(xi,b) K.k Q^dag = K.(M k). b^2 must be 1, -1 or 0.
Mat3 adjoint_rep(double xi, const Vec3& b, double tol = kTol);

/// 2x2 matrix of Q(xi,b) (x,p) Q^dag(xi,b). Consistent with adjoint_rep
/// through trace_map; quad_rep(2pi, (0,0,1)) = -1.
Mat2 quad_rep(double xi, const Vec3& b, double tol = kTol);

/// E_ij = 1/2 tr(Eq^t J_i Eq J_j).
Mat3 trace_map(const Mat2& eq);

/// max |E^t g E - g|.
double group_violation(const Mat3& E);
bool is_so21(const Mat3& E, double tol = kTol);

/// de/dt = A e with A = -2 omega [n^g]_x g.
Mat3 vector_generator(double omega, const Vec3& n);
/// d(xbar,pbar)/dt = B (xbar,pbar).
Mat2 quad_generator(double omega, const Vec3& n);

/// Reduce an angle into (-pi, pi].
double wrap_angle(double a);

}  // namespace so21
