#pragma once

#include <array>
#include <vector>

#include "so21osc/so21_core.hpp"

namespace so21 {

/// First moments and the second-moment vector u = <K> of a normalizable state.
struct MomentState {
  double xbar = 0.0;
  double pbar = 0.0;
  Vec3 u{0, 0, 0.5};
};

/// v(xbar, pbar) = (1/2 (x^2 - p^2), -x p, 1/2 (x^2 + p^2)).
Vec3 mean_vector(double xbar, double pbar);

/// Throws UncertaintyViolated or NegativeVariance.
void check_state(const MomentState& s, double tol = kTol);

MomentState eigenstate_moments(int n_index, const Vec3& e0, double tol = kTol);
/// Centered state with u = u0 e0 (u0 >= 1/2).
MomentState squeezed_state(double u0, const Vec3& e0, double tol = kTol);

/// Means by Eq_mat, u by E. Tolerance scales with |u|^2.
MomentState evolve_state(const MomentState& s, const Mat3& E, const Mat2& Eq, double tol = kTol);

struct Variances {
  double dx = 0.0, dp = 0.0, cov = 0.0;
};
Variances variances(const MomentState& s, double tol = kTol);

struct EllipseCoeffs {
  double A_pp = 0.0, A_qp = 0.0, A_qq = 0.0, I_action = 0.0;
};

/// A_pp p^2 + A_qp q p + A_qq q^2 = 2 I.
EllipseCoeffs classical_ellipse(const Vec3& e, double I_action, double tol = kTol);
std::vector<std::array<double, 2>> sample_orbit(const EllipseCoeffs& c,
                                                const std::vector<double>& theta);
double shoelace_area(const std::vector<std::array<double, 2>>& pts);

/// Hannay angle of a closed loop e(t) on the hyperboloid, recomputed as
/// -d/dI of the contour-averaged symplectic area (trapezoid rule on the loop).
double hannay_from_loop(const std::vector<Vec3>& loop, double I_action);

}  // namespace so21
