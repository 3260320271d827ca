#include "so21osc/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

// pchip in Boost 1.74 calls unqualified isnan
#include <math.h>

#include <boost/math/interpolators/makima.hpp>
#include <boost/math/interpolators/pchip.hpp>

namespace so21 {

const char* to_string(Nature n) {
  switch (n) {
    case Nature::Elliptic: return "Elliptic";
    case Nature::Hyperbolic: return "Hyperbolic";
    case Nature::Critical: return "Critical";
  }
  return "?";
}

const char* to_string(Family f) {
  switch (f) {
    case Family::A: return "A";
    case Family::B: return "B";
    case Family::C: return "C";
    case Family::D: return "D";
  }
  return "?";
}

const char* to_string(RegimeKind k) {
  switch (k) {
    case RegimeKind::Finite: return "Finite";
    case RegimeKind::ExpOscillating: return "ExpOscillating";
    case RegimeKind::PolyOscillating: return "PolyOscillating";
    case RegimeKind::ExpInfinite: return "ExpInfinite";
  }
  return "?";
}

Family family_from_string(const std::string& s) {
  if (s == "A" || s == "a") return Family::A;
  if (s == "B" || s == "b") return Family::B;
  if (s == "C" || s == "c") return Family::C;
  if (s == "D" || s == "d") return Family::D;
  throw Error(ErrorKind::InvalidFamilyParams, "unknown family '" + s + "'");
}

Nature classify(const Vec3& n, double tol) {
  double s = msq(n);
  double a = std::abs(s);
  if (a <= tol) return Nature::Critical;
  if (a < 10.0 * tol)
    throw Error(ErrorKind::AmbiguousNature, "n^2 = " + std::to_string(s));
  return s > 0.0 ? Nature::Elliptic : Nature::Hyperbolic;
}

// ---------------------------------------------------------------- PhaseFn

namespace {

using Pchip = boost::math::interpolators::pchip<std::vector<double>>;
using Makima = boost::math::interpolators::makima<std::vector<double>>;

// Piecewise-linear fallback for fewer than four knots.
struct Linear {
  std::vector<double> x, y;
  std::size_t seg(double t) const {
    auto it = std::upper_bound(x.begin(), x.end(), t);
    std::size_t i = it == x.begin() ? 0 : std::size_t(it - x.begin()) - 1;
    return std::min(i, x.size() - 2);
  }
  double operator()(double t) const {
    std::size_t i = seg(t);
    double s = (t - x[i]) / (x[i + 1] - x[i]);
    return y[i] + s * (y[i + 1] - y[i]);
  }
  double prime(double t) const {
    std::size_t i = seg(t);
    return (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
  }
};

// One interpolant in either form.
class Curve {
 public:
  Curve(std::vector<double> x, std::vector<double> y, bool monotone) {
    if (x.size() < 4) {
      lin_ = Linear{std::move(x), std::move(y)};
    } else if (monotone) {
      pchip_ = std::make_shared<Pchip>(std::move(x), std::move(y));
    } else {
      makima_ = std::make_shared<Makima>(std::move(x), std::move(y));
    }
  }
  double operator()(double t) const {
    if (pchip_) return (*pchip_)(t);
    if (makima_) return (*makima_)(t);
    return lin_(t);
  }
  double prime(double t) const {
    if (pchip_) return pchip_->prime(t);
    if (makima_) return makima_->prime(t);
    return lin_.prime(t);
  }

 private:
  std::shared_ptr<Pchip> pchip_;
  std::shared_ptr<Makima> makima_;
  Linear lin_;
};

void check_times(const std::vector<double>& t, ErrorKind kind) {
  if (t.size() < 2) throw Error(kind, "need at least two samples");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1]))
      throw Error(kind, "time not strictly increasing at row " + std::to_string(i));
}

}  // namespace

struct PhaseFn::Table {
  Curve curve;
  double t_end;
};

PhaseFn PhaseFn::linear(double rate) {
  if (!std::isfinite(rate) || rate == 0.0)
    throw Error(ErrorKind::InvalidFamilyParams, "phase rate must be finite and nonzero");
  PhaseFn f;
  f.rate_ = rate;
  return f;
}

PhaseFn PhaseFn::tabulated(std::vector<double> t, std::vector<double> phi) {
  if (t.size() != phi.size()) throw Error(ErrorKind::InvalidFamilyParams, "t/phi size mismatch");
  check_times(t, ErrorKind::InvalidFamilyParams);
  if (t.front() != 0.0 || phi.front() != 0.0)
    throw Error(ErrorKind::InvalidFamilyParams, "phase table must start at (0, 0)");
  double dir = phi[1] - phi[0];
  for (std::size_t i = 1; i < phi.size(); ++i)
    if (!((phi[i] - phi[i - 1]) * dir > 0.0))
      throw Error(ErrorKind::InvalidFamilyParams,
                  "phase not strictly monotone at row " + std::to_string(i));
  PhaseFn f;
  double te = t.back();
  f.table_ = std::make_shared<const Table>(Table{Curve(std::move(t), std::move(phi), true), te});
  f.rate_ = 0.0;
  return f;
}

double PhaseFn::value(double t) const { return table_ ? table_->curve(t) : rate_ * t; }
double PhaseFn::rate(double t) const { return table_ ? table_->curve.prime(t) : rate_; }
double PhaseFn::t_end() const {
  return table_ ? table_->t_end : std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------- families

Vec3 FamilySpec::n_at(double phi) const {
  switch (family) {
    case Family::A: return {n1, n2, n3};
    case Family::B: return {n1 * std::cos(2 * phi), n1 * std::sin(2 * phi), n3};
    case Family::C: return {n1, n3 * std::sinh(2 * phi), n3 * std::cosh(2 * phi)};
    case Family::D: return {n1, n3 * std::cosh(2 * phi), n3 * std::sinh(2 * phi)};
  }
  return {0, 0, 0};
}

void validate(const FamilySpec& s, double tol) {
  auto bad = [](const std::string& m) { throw Error(ErrorKind::InvalidFamilyParams, m); };
  if (!std::isfinite(s.n1) || !std::isfinite(s.n2) || !std::isfinite(s.n3) ||
      !std::isfinite(s.lambda))
    bad("non-finite parameter");
  if (s.family != Family::A && s.n2 != 0.0) bad("n2 is only meaningful for family A");
  double sq = 0.0;
  switch (s.family) {
    case Family::A: sq = s.n3 * s.n3 - s.n1 * s.n1 - s.n2 * s.n2; break;
    case Family::B:
    case Family::C: sq = s.n3 * s.n3 - s.n1 * s.n1; break;
    case Family::D:
      sq = -s.n3 * s.n3 - s.n1 * s.n1;
      if (std::abs(sq + 1.0) > tol) bad("family D needs n1^2 + n3^2 = 1");
      return;
  }
  if (std::abs(sq - 1.0) > tol && std::abs(sq + 1.0) > tol && std::abs(sq) > tol)
    bad("n^2 = " + std::to_string(sq) + " is not 1, -1 or 0");
  if (s.family == Family::A && std::abs(sq) <= tol && s.n3 == 0.0)
    bad("critical family A needs n3 != 0");
}

Nature family_nature(const FamilySpec& s, double tol) {
  validate(s, tol);
  if (s.family == Family::D) return Nature::Hyperbolic;
  return classify(s.n_at(0.0), tol);
}

double Profile::phi(double t) const {
  return family ? family->phase.value(t) : std::numeric_limits<double>::quiet_NaN();
}

Profile family_profile(const FamilySpec& spec, double t_max, double tol) {
  Profile p;
  p.nature = family_nature(spec, tol);
  if (!(t_max > 0.0) || t_max > spec.phase.t_end() * (1.0 + 1e-12))
    throw Error(ErrorKind::InvalidFamilyParams, "t_max outside the phase function domain");
  p.t_max = t_max;
  p.family = spec;
  FamilySpec s = spec;
  p.omega = [s](double t) { return s.lambda * s.phase.rate(t); };
  p.n = [s](double t) { return s.n_at(s.phase.value(t)); };
  return p;
}

Profile tabulated_profile(const std::vector<ProfileSample>& samples, double tol) {
  std::vector<double> t, w, a, b, c;
  for (const auto& s : samples) {
    t.push_back(s.t);
    w.push_back(s.omega);
    a.push_back(s.n1);
    b.push_back(s.n2);
    c.push_back(s.n3);
  }
  check_times(t, ErrorKind::NonMonotoneTime);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (!std::isfinite(s.omega) || !std::isfinite(s.n1) || !std::isfinite(s.n2) ||
        !std::isfinite(s.n3))
      throw Error(ErrorKind::BadInput, "non-finite value in row " + std::to_string(i));
  }
  double sq0 = msq(Vec3(a[0], b[0], c[0]));
  for (std::size_t i = 1; i < samples.size(); ++i) {
    double sq = msq(Vec3(a[i], b[i], c[i]));
    if (std::abs(sq - sq0) > 10.0 * tol)
      throw Error(ErrorKind::InconsistentNature,
                  "n^2 changes from " + std::to_string(sq0) + " to " + std::to_string(sq) +
                      " at row " + std::to_string(i));
  }
  Profile p;
  p.nature = classify(Vec3(a[0], b[0], c[0]), tol);
  p.t_max = t.back();
  Curve cw(t, std::move(w), true);
  Curve c1(t, std::move(a), false), c2(t, std::move(b), false), c3(t, std::move(c), false);
  p.omega = [cw](double x) { return cw(x); };
  p.n = [c1, c2, c3](double x) { return Vec3(c1(x), c2(x), c3(x)); };
  return p;
}

// ---------------------------------------------------------------- regime

namespace {

int sgn(double x) { return x < 0.0 ? -1 : 1; }

void add_boundary(std::vector<double>& out, double num, double den) {
  if (den != 0.0) out.push_back(num / den);
}

// Shared by B and C, with Lambda n_f = (x1, 0, x3).
void two_component_case(RegimeLabel& r, double x1, double x3, double tol) {
  r.lambda_nf = Vec3(x1, 0.0, x3);
  double rad = x3 * x3 - x1 * x1;
  if (rad > tol) {
    r.branch = 1;
    r.Lambda = std::sqrt(rad);
    r.epsilon = sgn(x3);
    r.xi_n = std::asinh(x1 / r.Lambda);
  } else if (rad < -tol) {
    r.branch = 2;
    r.Lambda = std::sqrt(-rad);
    r.epsilon = sgn(x1);
    r.xi_n = std::asinh(x3 / r.Lambda);
  } else {
    r.branch = 3;
    r.Lambda = 0.0;
    r.epsilon = (x1 == 0.0) ? 1 : sgn(x3 / x1);
    r.xi_n = 0.0;
  }
}

}  // namespace

RegimeLabel regime(const FamilySpec& s, double tol) {
  Nature nat = family_nature(s, tol);
  RegimeLabel r;
  const double lam = s.lambda;
  switch (s.family) {
    case Family::A: {
      Vec3 n(s.n1, s.n2, s.n3);
      r.branch = nat == Nature::Elliptic ? 1 : nat == Nature::Hyperbolic ? 2 : 3;
      r.phi_n = 0.5 * std::atan2(n[1], n[0]);
      if (nat == Nature::Elliptic) {
        r.kind = RegimeKind::Finite;
        r.epsilon = sgn(n[2]);
        r.xi_n = std::asinh(std::hypot(n[0], n[1]));
        r.Lambda = std::abs(lam);
        if (n[2] < 0) r.phi_n = 0.5 * std::atan2(-n[1], -n[0]);
      } else if (nat == Nature::Hyperbolic) {
        r.kind = RegimeKind::ExpInfinite;
        r.xi_n = std::asinh(n[2]);
        r.Lambda = std::abs(lam);
      } else {
        r.kind = RegimeKind::PolyOscillating;
        r.poly_flag = true;
        r.epsilon = sgn(n[2] * lam);
        r.Lambda = 0.0;
      }
      return r;
    }
    case Family::B: {
      two_component_case(r, lam * s.n1, lam * s.n3 - 1.0, tol);
      r.kind = r.branch == 1   ? RegimeKind::Finite
               : r.branch == 2 ? RegimeKind::ExpOscillating
                               : RegimeKind::PolyOscillating;
      r.poly_flag = r.branch == 3;
      add_boundary(r.boundary_lambdas, 1.0, s.n3 - s.n1);
      add_boundary(r.boundary_lambdas, 1.0, s.n3 + s.n1);
      break;
    }
    case Family::C: {
      two_component_case(r, lam * s.n1 + 1.0, lam * s.n3, tol);
      r.kind = r.branch == 1 ? RegimeKind::ExpOscillating : RegimeKind::ExpInfinite;
      r.poly_flag = r.branch == 3;
      add_boundary(r.boundary_lambdas, 1.0, s.n3 - s.n1);
      add_boundary(r.boundary_lambdas, -1.0, s.n3 + s.n1);
      break;
    }
    case Family::D: {
      double x1 = lam * s.n1 + 1.0, x2 = lam * s.n3;
      r.kind = RegimeKind::ExpInfinite;
      r.branch = 1;
      r.lambda_nf = Vec3(x1, x2, 0.0);
      r.Lambda = std::hypot(x1, x2);
      r.phi_n = 0.5 * std::atan2(x2, x1);
      return r;
    }
  }
  std::sort(r.boundary_lambdas.begin(), r.boundary_lambdas.end());
  r.boundary_lambdas.erase(std::unique(r.boundary_lambdas.begin(), r.boundary_lambdas.end()),
                           r.boundary_lambdas.end());
  return r;
}

}  // namespace so21
