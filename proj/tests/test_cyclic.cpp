#include <doctest.h>

#include <cmath>
#include <numbers>

#include "so21osc/cyclic.hpp"
#include "so21osc/oracles.hpp"
#include "so21osc/propagate.hpp"
#include "support/brute_force.hpp"
#include "support/specs.hpp"

using namespace so21;
using specs::make;
constexpr double pi = std::numbers::pi;

namespace {

struct Run {
  Trajectory tr;
  AlphaFn alpha;
};

// Integrates to phase phi_tau (sign gives the direction) and wires alpha_fn.
Run run_to(FamilySpec s, double phi_tau, std::size_t nodes = 33) {
  s.phase = PhaseFn::linear(phi_tau < 0 ? -1.0 : 1.0);
  const double T = std::abs(phi_tau);
  Profile p = family_profile(s, T);
  auto grid = uniform_grid(T, nodes);
  Run r{integrate(p, {0, 0, 1}, grid), {}};
  r.alpha = [p, grid](const Vec3& e0) {
    Trajectory t = integrate(p, e0, grid);
    return phases(t, 0.5, t.size() - 1).alpha_tau;
  };
  return r;
}

}  // namespace

TEST_CASE("fixed_vector examples") {
  FixedVectorResult id = fixed_vector(Mat3::Identity());
  CHECK(id.multiplicity == 3);
  CHECK((id.eta - Vec3(0, 0, 1)).norm() < 1e-14);
  CHECK_FALSE(id.defective);

  FamilySpec a = make(Family::A, 0.3, std::sqrt(1.25), 1.0, 0.4);
  Vec3 n(0.3, 0.4, std::sqrt(1.25));
  for (double p : {0.4, 1.0, 2.5, 4.0}) {
    FixedVectorResult r = fixed_vector(oracle_E(a, p));
    CHECK(r.multiplicity == 1);
    CHECK((r.eta - n).norm() < 1e-9);
    CHECK(msq(r.eta) == doctest::Approx(1.0));
  }

  FamilySpec c = make(Family::A, 0.6, 1.0, 0.5, 0.8);
  for (double p : {0.3, 1.7}) {
    FixedVectorResult r = fixed_vector(oracle_E(c, p));
    CHECK(r.multiplicity == 1);
    CHECK(r.algebraic_multiplicity == 3);
    CHECK(r.defective);
    CHECK(std::abs(r.eta_sq) < 1e-9);
  }

  // no unit eigenvalue at all
  CHECK_THROWS_AS(fixed_vector(2.0 * Mat3::Identity()), Error);
}

TEST_CASE("verdict examples") {
  Run a = run_to(make(Family::A, 0, 1, 1.0), -2 * pi);
  CyclicVerdict v = verdict(a.tr.E.back(), a.tr.Eq.back(), a.alpha);
  CHECK(v.kind == VerdictKind::AllStates);
  REQUIRE(v.N);
  CHECK(*v.N == 1);
  CHECK(max_abs(a.tr.E.back() - Mat3::Identity()) < 1e-7);

  Run h = run_to(make(Family::A, 0, 1, 1.0), -pi);
  CyclicVerdict vh = verdict(h.tr.E.back(), h.tr.Eq.back(), h.alpha);
  CHECK(vh.kind == VerdictKind::AllDefiniteParity);
  REQUIRE(vh.N);
  CHECK(*vh.N == 0);
  REQUIRE(vh.parity_phases);
  CHECK(vh.parity_phases->first == doctest::Approx(pi / 2));
  CHECK(vh.parity_phases->second == doctest::Approx(-pi / 2));
  CHECK(max_abs(h.tr.E.back() - Mat3::Identity()) < 1e-7);

  FamilySpec b = make(Family::B, 0.75, 1.25, 0.2);
  double L = regime(b).Lambda;
  for (int k : {1, 2, 3}) {
    Run rb = run_to(b, k * pi, 65);
    CyclicVerdict vb = verdict(rb.tr.E.back(), rb.tr.Eq.back(), rb.alpha);
    CHECK(vb.kind == VerdictKind::Denumerable);
    CHECK(vb.eta_sq > 0);
    auto [eta, es] = oracle_eta(b, k * pi);
    CHECK(es == doctest::Approx(std::pow(std::sin(L * k * pi), 2)));
    Vec3 unit = eta / std::sqrt(es);
    if (unit[2] < 0) unit = -unit;
    CHECK((vb.eta - unit).norm() < 1e-6);
  }

  FamilySpec d = make(Family::D, 0.6, 0.8, 0.7);
  for (double tau : {0.3, 1.0, 2.0}) {
    Run rd = run_to(d, tau);
    CHECK(verdict(rd.tr.E.back(), rd.tr.Eq.back(), rd.alpha).kind == VerdictKind::NoneExist);
  }
}

TEST_CASE("property: alpha is independent of e0 in the special cases") {
  for (double tau : {-2 * pi, -pi, -4 * pi}) {
    Run r = run_to(make(Family::A, 0, 1, 1.0), tau, 65);
    double a0 = r.alpha(Vec3(0, 0, 1));
    for (Vec3 e0 : {param_to_vec({0.5, 0.3}), param_to_vec({1.4, -2.2})})
      CHECK(std::abs(r.alpha(e0) - a0) < 1e-7);
  }
}

TEST_CASE("property: verdict agrees with a brute-force fixed-vector search") {
  struct Case {
    FamilySpec s;
    double lo, hi;
  };
  std::vector<Case> cases = {{make(Family::A, 0.3, std::sqrt(1.25), 1.0, 0.4), 0.05, 4 * pi},
                             {make(Family::B, 0.75, 1.25, 0.2), 0.05, 4 * pi},
                             {make(Family::C, 0.75, 1.25, 3.0), 0.02, 2.0},
                             {make(Family::D, 0.6, 0.8, 0.7), 0.02, 2.5}};
  auto never = [](const Vec3&) { return 0.0; };
  for (const auto& c : cases) {
    CAPTURE(to_string(c.s.family));
    for (int k = 0; k < 12; ++k) {
      double phi = c.lo + (c.hi - c.lo) * k / 11;
      CAPTURE(phi);
      Mat3 E = oracle_E(c.s, phi);
      Mat2 Eq = oracle_Eq(c.s, phi);
      CyclicVerdict v = verdict(E, Eq, never);
      bf::Hit hit = bf::search(E);
      CHECK((v.kind != VerdictKind::NoneExist) == hit.found);
    }
  }
}

TEST_CASE("denumerable and general geometric phases") {
  auto [d0, g0] = denumerable_phases(0, 2 * pi, 0.0);
  CHECK(std::abs(wrap_angle(d0 - pi)) < 1e-15);
  CHECK(g0 == 0.0);

  const double h = 2 * pi * (std::cosh(1.0) - 1);
  auto [d1, g1] = denumerable_phases(0, 2 * pi, h);
  CHECK(g1 == doctest::Approx(-0.5 * h));
  CHECK(g1 == doctest::Approx(pi * (1 - std::cosh(1.0))));
  (void)d1;

  CHECK(general_geometric_phase(0.5, h, EvenCase{1}) == doctest::Approx(wrap_angle(-0.5 * h)));
  CHECK(general_geometric_phase(4.5, h, RationalCase{1, 2, 1}) ==
        doctest::Approx(wrap_angle(-4.5 * h - 2 * pi)));
  CHECK_THROWS_AS(general_geometric_phase(4.0, h, RationalCase{1, 2, 1}), Error);
  CHECK_THROWS_AS(general_geometric_phase(0.3, h, EvenCase{1}), Error);

  // Integer u0 - 1/2 kills the extra term.
  CHECK(general_geometric_phase(1.5, h, EvenCase{3}) ==
        doctest::Approx(wrap_angle(-1.5 * h)));
  CHECK(general_geometric_phase(0.75, h, EvenCase{1}) ==
        doctest::Approx(wrap_angle(-0.75 * h - 0.5 * pi)));
}

TEST_CASE("property: eigenstate inputs reduce to the denumerable formula") {
  for (double h : {0.0, 0.7, 3.41, -2.2})
    for (int n = 0; n <= 5; ++n) {
      const double u0 = n + 0.5;
      double gamma_n = denumerable_phases(n, 0.0, h).second;
      for (long N : {0L, 1L, 2L, -1L}) {
        CHECK(std::abs(wrap_angle(general_geometric_phase(u0, h, EvenCase{N}) - gamma_n)) < 1e-9);
        int parity = n % 2 == 0 ? 1 : -1;
        CHECK(std::abs(wrap_angle(general_geometric_phase(u0, h, OddCase{N, parity}) -
                                  gamma_n)) < 1e-9);
      }
    }
}

TEST_CASE("rational_alpha") {
  auto a = rational_alpha(pi / 2, 64);
  REQUIRE(a);
  CHECK(a->first == 1);
  CHECK(a->second == 2);
  auto b = rational_alpha(2 * pi, 64);
  REQUIRE(b);
  CHECK(b->first == 2);
  CHECK(b->second == 1);
  CHECK_FALSE(rational_alpha(std::sqrt(2.0) * pi, 64));
  auto c = rational_alpha(-3 * pi / 7, 64);
  REQUIRE(c);
  CHECK(c->first == -3);
  CHECK(c->second == 7);
}
