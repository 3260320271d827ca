#pragma once

// Named family parameter sets shared by the unit tests and the acceptance run,
// plus a random valid-spec generator for property tests.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "so21osc/model.hpp"

namespace specs {

using so21::Family;
using so21::FamilySpec;

inline FamilySpec make(Family f, double n1, double n3, double lambda, double n2 = 0.0) {
  FamilySpec s;
  s.family = f;
  s.n1 = n1;
  s.n2 = n2;
  s.n3 = n3;
  s.lambda = lambda;
  s.phase = so21::PhaseFn::linear(1.0);
  return s;
}

struct Named {
  std::string name;
  FamilySpec spec;
};

// One set per closed-form branch, eleven in all.
inline std::vector<Named> branch_sets() {
  return {
      {"A elliptic", make(Family::A, 0.3, std::sqrt(1.25), 1.0, 0.4)},
      {"A hyperbolic", make(Family::A, 1.2, std::sqrt(0.44), 0.25)},
      {"A critical", make(Family::A, 0.6, 1.0, 0.5, 0.8)},
      {"B finite", make(Family::B, 0.75, 1.25, 0.2)},
      {"B finite eps+", make(Family::B, 0.75, 1.25, 2.5)},
      {"B exp", make(Family::B, 0.75, 1.25, 0.52)},
      {"B poly", make(Family::B, 0.75, 1.25, 0.5)},
      {"C case 1", make(Family::C, 0.75, 1.25, 3.0)},
      {"C case 2", make(Family::C, 0.75, 1.25, 0.3)},
      {"C case 3", make(Family::C, 0.75, 1.25, 2.0)},
      {"D", make(Family::D, 0.6, 0.8, 0.7)},
  };
}

// Random valid spec of the given family; nature chosen uniformly for A/B/C.
inline FamilySpec random_spec(std::mt19937& rng, Family f) {
  std::uniform_real_distribution<double> U(-1.5, 1.5), L(-2.5, 2.5);
  std::uniform_int_distribution<int> pick(0, 2);
  double lam = L(rng);
  if (std::abs(lam) < 0.05) lam = 0.3;
  if (f == Family::D) {
    double th = U(rng) * 2;
    return make(f, std::cos(th), std::sin(th), lam);
  }
  double a = U(rng), b = f == Family::A ? U(rng) : 0.0;
  double r = std::hypot(a, b);
  double sign = U(rng) < 0 ? -1.0 : 1.0;
  double n3 = 0.0;
  switch (pick(rng)) {
    case 0: n3 = sign * std::sqrt(1 + r * r); break;
    case 1:
      if (r < 1.0) {
        double k = 1.05 / std::max(r, 1e-3);
        a *= k;
        b *= k;
        r *= k;
      }
      n3 = sign * std::sqrt(r * r - 1);
      break;
    default:
      if (r < 0.1) {
        a += 0.5;
        r = std::hypot(a, b);
      }
      n3 = sign * r;
      break;
  }
  return make(f, a, n3, lam, b);
}

}  // namespace specs
