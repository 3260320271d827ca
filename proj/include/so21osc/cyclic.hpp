#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "so21osc/so21_core.hpp"

namespace so21 {

struct FixedVectorResult {
  Vec3 eta{0, 0, 1};
  double eta_sq = 1.0;  // square of the Euclidean-normalized fixed vector
  int multiplicity = 1;  // null-space dimension of E - 1
  int algebraic_multiplicity = 1;
  bool defective = false;
};

/// Fixed vector of E from the SVD of E - 1. Timelike results are scaled to
/// the upper unit hyperboloid.
FixedVectorResult fixed_vector(const Mat3& E, double tol = kTol);

enum class VerdictKind { NoneExist, Denumerable, AllDefiniteParity, AllStates };
const char* to_string(VerdictKind k);

struct CyclicVerdict {
  VerdictKind kind = VerdictKind::NoneExist;
  std::optional<double> alpha_tau;
  std::optional<long> N;
  std::optional<std::pair<double, double>> parity_phases;  // (delta+, delta-)
  Vec3 eta{0, 0, 1};
  double eta_sq = 0.0;
  bool boundary = false;  // |eta^2| within tol of zero
};

/// alpha_fn(e0) returns alpha(tau) integrated from the unit vector e0.
using AlphaFn = std::function<double(const Vec3&)>;

CyclicVerdict verdict(const Mat3& E_tau, const Mat2& Eq_tau, const AlphaFn& alpha_fn,
                      double special_tol = 1e-7, double tol = kTol);

/// (delta_n, gamma_n) for the n-th eigenstate of K.e0^g.
std::pair<double, double> denumerable_phases(int n_index, double alpha_tau, double hannay);

struct EvenCase {
  long N;
};
struct OddCase {
  long N;
  int parity;  // +1 or -1
};
struct RationalCase {
  long r0, s0, s_bar;
};

double general_geometric_phase(double u0, double hannay, const EvenCase& c);
double general_geometric_phase(double u0, double hannay, const OddCase& c);
/// u0 must equal 2 s0 s_bar + 1/2.
double general_geometric_phase(double u0, double hannay, const RationalCase& c);

/// Continued-fraction approximation r0/s0 of alpha/pi with s0 <= max_den,
/// accepted within 1e-9.
std::optional<std::pair<long, long>> rational_alpha(double alpha_tau, long max_den);

}  // namespace so21
