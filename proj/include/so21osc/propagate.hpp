#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "so21osc/model.hpp"

namespace so21 {

/// de/dt = -2 omega (n^g x e^g).
Vec3 rhs(const Vec3& e, double omega, const Vec3& n);

struct IntegrateOptions {
  // Substeps per grid interval keep h * 2|omega| * |n| below this bound.
  double step_bound = 1e-3;
  double drift_tol = 1e-6;
  double group_tol = 1e-6;
  long long max_substeps = 20'000'000;
  // Any e0 allowed; the phase accumulators stay at zero.
  bool raw_mode = false;
};

struct Trajectory {
  std::vector<double> t;
  std::vector<double> phi;  // family phase per node, empty for tabulated profiles
  std::vector<Vec3> e;
  std::vector<Mat3> E;
  std::vector<Mat2> Eq;
  std::vector<double> A1;
  std::vector<double> A2;
  Vec3 e0{0, 0, 1};
  bool raw_mode = false;
  double drift_max = 0.0;
  double group_violation_max = 0.0;
  long long substeps = 0;

  std::size_t size() const { return t.size(); }
};

std::vector<double> uniform_grid(double t_max, std::size_t nodes);

/// Fixed-step RK4 on e, the columns of E, E_q and the two phase integrands.
Trajectory integrate(const Profile& profile, const Vec3& e0, const std::vector<double>& grid,
                     const IntegrateOptions& opts = {});

/// Number of RK4 substeps integrate() would take; used for budgeting.
long long planned_substeps(const Profile& profile, const std::vector<double>& grid,
                           double step_bound);

struct PhaseReport {
  double alpha_tau = 0.0;
  double hannay = 0.0;
  double dynamical = 0.0;
  double total = 0.0;
  double geometric = 0.0;
  double u0 = 0.5;
};

PhaseReport phases(const Trajectory& traj, double u0, std::size_t tau_index);

struct UDecomposition {
  double xi_t = 0.0, phi_t = 0.0, alpha_t = 0.0, xi_0 = 0.0, phi_0 = 0.0;
  /// Mean-propagation matrix of the three-factor product.
  Mat2 quad() const;
};

UDecomposition u_decomposition(const Trajectory& traj, std::size_t t_index);

struct GrowthFit {
  double loglin_slope = 0.0;
  double loglog_slope = 0.0;
  double phi_lo = 0.0;
  double phi_hi = 0.0;
  bool agrees = false;
};

/// Measures the growth of |E_q(phi)|_F by integration over a window matched to
/// the regime's time scale, then checks it against the label.
GrowthFit measure_growth(const FamilySpec& spec, const RegimeLabel& label,
                         const IntegrateOptions& opts = {});

}  // namespace so21
