#pragma once

#include <utility>
#include <vector>

#include "so21osc/model.hpp"

namespace so21 {

// Named closed-form factors shared by the four families.
namespace blocks {
Mat3 R(double phi);
Mat3 S(double xi, int eps);
Mat3 T(double phi);
Mat2 Rq(double phi);
Mat2 Tq(double phi);
Mat3 W_plus(double L, double phi);
Mat3 W_minus(double L, double phi);
Mat2 Wq_plus(double L, double xi, int eps, double phi);
Mat2 Wq_minus(double L, double xi, int eps, double phi);
Mat3 D_poly(double a, int eps, double phi);
Mat2 Wq_poly(double a, int eps, double phi);
Mat2 Wq_d(double L, double phi);
}  // namespace blocks

struct OracleEval {
  Mat3 E;
  Mat2 Eq;
  Vec3 eta;
  double eta_sq = 0.0;
  double phi = 0.0;
};

Mat3 oracle_E(const FamilySpec& spec, double phi);
Mat2 oracle_Eq(const FamilySpec& spec, double phi);
/// Unnormalized fixed vector of oracle_E and its closed-form square.
std::pair<Vec3, double> oracle_eta(const FamilySpec& spec, double phi);
OracleEval oracle_eval(const FamilySpec& spec, double phi);

/// Second closed form of eta^2 for family C, case 2, epsilon = +1.
double eta_sq_c2_alt(const FamilySpec& spec, double phi);

enum class Prefactor { K3, K1 };

/// U = exp(-i s phi K_pre) exp(-i Lambda phi K.n_f^g).
struct Decomposition {
  Prefactor prefactor = Prefactor::K3;
  double Lambda = 0.0;
  Vec3 n_f{0, 0, 0};
  Vec3 lambda_nf{0, 0, 0};
  /// Mean-propagation matrix of the factorized U at phase phi.
  Mat2 quad(double phi) const;
};

/// Families B, C, D. UnsupportedFamily for A.
Decomposition oracle_decomposition(const FamilySpec& spec);

enum class RootFamily {
  TanOverTanh,   // tan(L phi) = tanh(phi) / sinh(xi)
  TanhRatio,     // tanh(phi) = cosh(xi) tanh(L phi)
  TanhLinear,    // tanh(phi) = c phi
};

/// Roots in (lo, hi] by sign changes on a 0.01 mesh, bisected to 1e-12.
std::vector<double> transcendental_roots(RootFamily which, double L, double xi, double c,
                                         double lo, double hi);
/// Same with the parameters taken from regime(spec) (family C).
std::vector<double> transcendental_roots(const FamilySpec& spec, RootFamily which, double lo,
                                         double hi);

}  // namespace so21
