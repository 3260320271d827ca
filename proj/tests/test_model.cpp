#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "so21osc/model.hpp"
#include "so21osc/oracles.hpp"
#include "so21osc/propagate.hpp"

using namespace so21;
constexpr double pi = std::numbers::pi;

namespace {

FamilySpec fam(Family f, double n1, double n3, double lambda, double rate = 1.0) {
  FamilySpec s;
  s.family = f;
  s.n1 = n1;
  s.n3 = n3;
  s.lambda = lambda;
  s.phase = PhaseFn::linear(rate);
  return s;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::BadInput;
}

}  // namespace

TEST_CASE("classify examples") {
  CHECK(classify({0, 0, 1}) == Nature::Elliptic);
  CHECK(classify({0, 1, 0}) == Nature::Hyperbolic);
  CHECK(classify({std::cos(0.3), std::sin(0.3), 1}) == Nature::Critical);
  CHECK(kind_of([] { classify({0, 0, std::sqrt(5e-9)}); }) == ErrorKind::AmbiguousNature);
}

TEST_CASE("family_profile examples") {
  FamilySpec a;
  a.family = Family::A;
  a.n1 = 0;
  a.n3 = 1;
  a.lambda = 1;
  a.phase = PhaseFn::linear(2.5);
  Profile p = family_profile(a, 3.0);
  CHECK(p.nature == Nature::Elliptic);
  for (double t : {0.0, 0.7, 3.0}) {
    CHECK(p.omega(t) == doctest::Approx(2.5));
    CHECK((p.n(t) - Vec3(0, 0, 1)).norm() == 0.0);
  }

  CHECK(family_nature(fam(Family::B, 0.75, 1.25, 0.2)) == Nature::Elliptic);
  CHECK(family_nature(fam(Family::D, 0.0, 1.0, 0.3)) == Nature::Hyperbolic);
  CHECK(kind_of([] { validate(fam(Family::B, 0.75, 1.3, 0.2)); }) ==
        ErrorKind::InvalidFamilyParams);
  CHECK(kind_of([] { validate(fam(Family::D, 0.5, 0.5, 0.2)); }) ==
        ErrorKind::InvalidFamilyParams);
}

TEST_CASE("property: family nature is constant along the profile") {
  std::vector<FamilySpec> specs = {
      fam(Family::B, 0.75, 1.25, 0.2),  fam(Family::B, 1.25, 0.75, 0.6),
      fam(Family::B, 1.0, 1.0, 0.4),    fam(Family::C, 0.75, 1.25, 0.3),
      fam(Family::C, 1.25, 0.75, 0.3),  fam(Family::D, 0.6, 0.8, 0.5)};
  for (const auto& s : specs) {
    Profile p = family_profile(s, 6.0);
    for (int k = 0; k <= 60; ++k) CHECK(classify(p.n(0.1 * k), 1e-8) == p.nature);
  }
}

TEST_CASE("property: omega equals lambda times the phase rate") {
  std::vector<double> t, ph;
  for (int k = 0; k <= 40; ++k) {
    double x = 0.1 * k;
    t.push_back(x);
    ph.push_back(x + 0.3 * std::sin(x));
  }
  FamilySpec s = fam(Family::B, 0.75, 1.25, 0.2);
  s.phase = PhaseFn::tabulated(t, ph);
  Profile p = family_profile(s, 4.0);
  const double h = 1e-5;
  for (double x = 0.2; x < 3.8; x += 0.13) {
    double d = (s.phase.value(x + h) - s.phase.value(x - h)) / (2 * h);
    CHECK(p.omega(x) == doctest::Approx(0.2 * d).epsilon(1e-6));
    // close to the sampled function too
    CHECK(s.phase.value(x) == doctest::Approx(x + 0.3 * std::sin(x)).epsilon(2e-4));
  }
}

TEST_CASE("phase function validation") {
  CHECK_THROWS_AS(PhaseFn::linear(0.0), Error);
  CHECK_THROWS_AS(PhaseFn::tabulated({0, 1, 2}, {0.1, 1, 2}), Error);
  CHECK_THROWS_AS(PhaseFn::tabulated({0, 1, 2, 3}, {0, 1, 0.5, 2}), Error);
  CHECK_NOTHROW(PhaseFn::tabulated({0, 1, 2, 3}, {0, -1, -2, -3}));
}

TEST_CASE("regime examples") {
  RegimeLabel r = regime(fam(Family::B, 0.75, 1.25, 0.2));
  CHECK(r.kind == RegimeKind::Finite);
  CHECK(r.Lambda == doctest::Approx(std::sqrt(0.54)).epsilon(1e-14));
  CHECK(r.Lambda == doctest::Approx(0.734847).epsilon(1e-6));
  REQUIRE(r.boundary_lambdas.size() == 2);
  CHECK(r.boundary_lambdas[0] == doctest::Approx(0.5));
  CHECK(r.boundary_lambdas[1] == doctest::Approx(2.0));

  CHECK(regime(fam(Family::B, 0.75, 1.25, 0.5)).kind == RegimeKind::PolyOscillating);
  CHECK(regime(fam(Family::B, 0.75, 1.25, 2.0)).kind == RegimeKind::PolyOscillating);
  CHECK(regime(fam(Family::B, 0.75, 1.25, 0.8)).kind == RegimeKind::ExpOscillating);
  CHECK(regime(fam(Family::B, 0.75, 1.25, 1.0)).kind == RegimeKind::ExpOscillating);
  CHECK(regime(fam(Family::B, 0.75, 1.25, 2.5)).kind == RegimeKind::Finite);

  // Exponential branch: Lambda^2 = (lambda n1)^2 - (lambda n3 - 1)^2.
  RegimeLabel e = regime(fam(Family::B, 0.75, 1.25, 1.0));
  CHECK(e.Lambda == doctest::Approx(std::sqrt(0.5625 - 0.0625)));
  CHECK(std::sinh(e.xi_n) == doctest::Approx(0.25 / e.Lambda));

  CHECK(regime(fam(Family::D, 0.6, 0.8, 0.5)).kind == RegimeKind::ExpInfinite);
}

TEST_CASE("regime for families C and D") {
  // C: radicand (lambda n3)^2 - (lambda n1 + 1)^2.
  RegimeLabel c1 = regime(fam(Family::C, 0.75, 1.25, 3.0));
  CHECK(c1.branch == 1);
  CHECK(c1.kind == RegimeKind::ExpOscillating);
  CHECK(c1.Lambda == doctest::Approx(std::sqrt(3.75 * 3.75 - 3.25 * 3.25)));
  RegimeLabel c2 = regime(fam(Family::C, 0.75, 1.25, 0.3));
  CHECK(c2.branch == 2);
  CHECK(c2.kind == RegimeKind::ExpInfinite);
  CHECK(c2.Lambda == doctest::Approx(std::sqrt(1.225 * 1.225 - 0.375 * 0.375)));
  CHECK(std::sinh(c2.xi_n) == doctest::Approx(0.375 / c2.Lambda));
  RegimeLabel c3 = regime(fam(Family::C, 0.75, 1.25, 2.0));
  CHECK(c3.branch == 3);
  CHECK(c3.poly_flag);
  CHECK(c3.kind == RegimeKind::ExpInfinite);

  RegimeLabel d = regime(fam(Family::D, 0.6, 0.8, 0.5));
  CHECK(d.Lambda == doctest::Approx(std::hypot(1.3, 0.4)));
  CHECK((d.lambda_nf - Vec3(1.3, 0.4, 0)).norm() < 1e-15);
}

TEST_CASE("property: elliptic B boundaries located by bisection") {
  for (auto [n1, n3] : {std::pair{0.75, 1.25}, std::pair{-0.75, 1.25}, std::pair{0.3, std::sqrt(1.09)},
                        std::pair{2.0, std::sqrt(5.0)}}) {
    auto kind = [&](double l) { return regime(fam(Family::B, n1, n3, l)).kind; };
    double lo_b = n3 - std::abs(n1), hi_b = n3 + std::abs(n1);
    // Bisect each edge of the PolyOscillating band; its midpoint is the boundary.
    auto edge = [&](double a, double b, RegimeKind ka) {
      for (int i = 0; i < 200 && std::abs(b - a) > 1e-14; ++i) {
        double m = 0.5 * (a + b);
        (kind(m) == ka ? a : b) = m;
      }
      return 0.5 * (a + b);
    };
    auto locate = [&](double a, double b) {
      RegimeKind ka = kind(a), kb = kind(b);
      double l = edge(a, b, ka), r = edge(b, a, kb);
      CHECK(kind(0.5 * (l + r)) == RegimeKind::PolyOscillating);
      return 0.5 * (l + r);
    };
    CHECK(kind(0.5 * lo_b) == RegimeKind::Finite);
    CHECK(std::abs(locate(0.5 * lo_b, 0.5 * (lo_b + hi_b)) - lo_b) <= 1e-9);
    CHECK(kind(0.5 * (lo_b + hi_b)) == RegimeKind::ExpOscillating);
    CHECK(std::abs(locate(0.5 * (lo_b + hi_b), 2 * hi_b) - hi_b) <= 1e-9);
    CHECK(kind(2 * hi_b) == RegimeKind::Finite);
  }
}

TEST_CASE("regime for family A") {
  FamilySpec a;
  a.family = Family::A;
  a.lambda = 1.0;
  a.n1 = 0.3;
  a.n2 = 0.4;
  a.n3 = std::sqrt(1.25);
  CHECK(regime(a).kind == RegimeKind::Finite);
  CHECK(regime(a).xi_n == doctest::Approx(std::asinh(0.5)));
  a.n1 = 1.2;
  a.n2 = 0.0;
  a.n3 = std::sqrt(0.44);
  CHECK(regime(a).kind == RegimeKind::ExpInfinite);
  a.n1 = std::cos(0.3);
  a.n2 = std::sin(0.3);
  a.n3 = 1.0;
  CHECK(regime(a).kind == RegimeKind::PolyOscillating);
}

TEST_CASE("tabulated_profile examples") {
  Profile p = tabulated_profile({{0, 1, 0, 0, 1}, {1, 1, 0, 0, 1}});
  CHECK(p.nature == Nature::Elliptic);
  CHECK(p.omega(0.4) == doctest::Approx(1.0));
  CHECK((p.n(0.4) - Vec3(0, 0, 1)).norm() < 1e-15);

  CHECK(kind_of([] { tabulated_profile({{0, 1, 0, 0, 1}, {1, 1, 0, 1, 0}}); }) ==
        ErrorKind::InconsistentNature);
  CHECK(kind_of([] { tabulated_profile({{0, 1, 0, 0, 1}, {0, 1, 0, 0, 1}}); }) ==
        ErrorKind::NonMonotoneTime);
  CHECK(kind_of([] { tabulated_profile({{0, 1, 0, 0, 1}, {1, NAN, 0, 0, 1}}); }) ==
        ErrorKind::BadInput);
}

TEST_CASE("dense tabulated family B matches the closed form") {
  FamilySpec s = fam(Family::B, 0.75, 1.25, 0.2);
  std::vector<ProfileSample> rows;
  const int M = 4000;
  const double T = 4 * pi;
  for (int k = 0; k <= M; ++k) {
    double t = T * k / M;
    Vec3 n = s.n_at(t);
    rows.push_back({t, s.lambda, n[0], n[1], n[2]});
  }
  // Cubic interpolation of n leaves n^2 off by up to ~1e-13; well inside tol.
  Profile p = tabulated_profile(rows);
  Trajectory tr = integrate(p, {0, 0, 1}, uniform_grid(T, 9));
  for (std::size_t k = 0; k < tr.size(); ++k) {
    Mat3 want = oracle_E(s, tr.t[k]);
    CHECK(max_abs(tr.E[k] - want) < 1e-7);
  }
}
