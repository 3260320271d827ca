#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "so21osc/so21_core.hpp"

namespace so21 {

enum class Nature { Elliptic, Hyperbolic, Critical };
enum class Family { A, B, C, D };
enum class RegimeKind { Finite, ExpOscillating, PolyOscillating, ExpInfinite };

const char* to_string(Nature n);
const char* to_string(Family f);
const char* to_string(RegimeKind k);
Family family_from_string(const std::string& s);

/// Sign of n^2. AmbiguousNature when |n^2| lies in (tol, 10 tol).
Nature classify(const Vec3& n, double tol = kTol);

/// Monotone phase function phi(t), phi(0) = 0. Either a constant rate or a
/// monotone cubic through tabulated (t, phi) samples.
class PhaseFn {
 public:
  static PhaseFn linear(double rate);
  static PhaseFn tabulated(std::vector<double> t, std::vector<double> phi);

  double value(double t) const;
  double rate(double t) const;
  bool is_linear() const { return !table_; }
  double linear_rate() const { return rate_; }
  /// Largest t where the phase is defined (infinity for linear).
  double t_end() const;

 private:
  struct Table;
  double rate_ = 1.0;
  std::shared_ptr<const Table> table_;
};

struct FamilySpec {
  Family family = Family::A;
  double n1 = 0.0;
  double n2 = 0.0;  // used by family A only
  double n3 = 1.0;
  double lambda = 1.0;
  PhaseFn phase = PhaseFn::linear(1.0);

  /// Hamiltonian direction at phase phi.
  Vec3 n_at(double phi) const;
};

/// Throws InvalidFamilyParams when the n^2 constraint fails.
void validate(const FamilySpec& spec, double tol = kTol);
Nature family_nature(const FamilySpec& spec, double tol = kTol);

struct Profile {
  std::function<double(double)> omega;
  std::function<Vec3(double)> n;
  Nature nature = Nature::Elliptic;
  double t_max = 0.0;
  std::optional<FamilySpec> family;

  /// Family phase at time t; NaN for profiles without a family.
  double phi(double t) const;
};

Profile family_profile(const FamilySpec& spec, double t_max, double tol = kTol);

struct ProfileSample {
  double t, omega, n1, n2, n3;
};

/// Monotone cubic for omega, componentwise cubic for n (linear below four
/// samples). n^2 is checked on the samples, never renormalized.
Profile tabulated_profile(const std::vector<ProfileSample>& samples, double tol = kTol);

struct RegimeLabel {
  RegimeKind kind = RegimeKind::Finite;
  double Lambda = 0.0;
  double xi_n = 0.0;
  int epsilon = 1;
  std::vector<double> boundary_lambdas;
  bool poly_flag = false;
  int branch = 1;          // 1, 2, 3 for the three cases of B/C and the natures of A
  Vec3 lambda_nf{0, 0, 0};  // Lambda * n_f (families B, C, D)
  double phi_n = 0.0;       // family D and family A direction angle
};

RegimeLabel regime(const FamilySpec& spec, double tol = kTol);

}  // namespace so21
