#include "so21osc/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace so21 {

Vec3 rhs(const Vec3& e, double omega, const Vec3& n) {
  return -2.0 * omega * gflip(n).cross(gflip(e));
}

std::vector<double> uniform_grid(double t_max, std::size_t nodes) {
  if (nodes < 2 || !(t_max > 0.0)) throw Error(ErrorKind::InvalidGrid, "need t_max > 0 and >= 2 nodes");
  std::vector<double> g(nodes);
  for (std::size_t i = 0; i < nodes; ++i) g[i] = t_max * double(i) / double(nodes - 1);
  g.back() = t_max;
  return g;
}

namespace {

struct State {
  Vec3 e;
  Mat3 Y;
  Mat2 Q;
  double a1 = 0.0, a2 = 0.0;
};

struct Deriv {
  Vec3 e;
  Mat3 Y;
  Mat2 Q;
  double a1, a2;
};

struct Coeffs {
  double omega;
  Vec3 n;
  Mat3 A;
  Mat2 B;
};

Coeffs coeffs_at(const Profile& p, double t) {
  Coeffs c;
  c.omega = p.omega(t);
  c.n = p.n(t);
  c.A = vector_generator(c.omega, c.n);
  c.B = quad_generator(c.omega, c.n);
  return c;
}

Deriv deriv(const Coeffs& c, const State& s, bool raw) {
  Deriv d;
  d.e = c.A * s.e;
  d.Y = c.A * s.Y;
  d.Q = c.B * s.Q;
  if (raw) {
    d.a1 = d.a2 = 0.0;
  } else {
    d.a1 = 0.5 * (s.e[0] * d.e[1] - d.e[0] * s.e[1]) / (s.e[2] + 1.0);
    d.a2 = c.omega * mdot(s.e, c.n);
  }
  return d;
}

State axpy(const State& s, double h, const Deriv& d) {
  State r;
  r.e = s.e + h * d.e;
  r.Y = s.Y + h * d.Y;
  r.Q = s.Q + h * d.Q;
  r.a1 = s.a1 + h * d.a1;
  r.a2 = s.a2 + h * d.a2;
  return r;
}

// Compensated add: the increments are tiny next to |E| on long hyperbolic
// runs, and plain accumulation lets roundoff swamp the u^2 budget.
template <class T>
void kahan_add(T& sum, T& comp, const T& inc) {
  T y = inc - comp;
  T t = sum + y;
  comp = (t - sum) - y;
  sum = t;
}

void rk4_step(const Profile& p, double t, double h, State& s, State& comp, bool raw) {
  Coeffs c0 = coeffs_at(p, t), cm = coeffs_at(p, t + 0.5 * h), c1 = coeffs_at(p, t + h);
  Deriv k1 = deriv(c0, s, raw);
  Deriv k2 = deriv(cm, axpy(s, 0.5 * h, k1), raw);
  Deriv k3 = deriv(cm, axpy(s, 0.5 * h, k2), raw);
  Deriv k4 = deriv(c1, axpy(s, h, k3), raw);
  const double w = h / 6.0;
  kahan_add<Vec3>(s.e, comp.e, w * (k1.e + 2.0 * k2.e + 2.0 * k3.e + k4.e));
  kahan_add<Mat3>(s.Y, comp.Y, w * (k1.Y + 2.0 * k2.Y + 2.0 * k3.Y + k4.Y));
  kahan_add<Mat2>(s.Q, comp.Q, w * (k1.Q + 2.0 * k2.Q + 2.0 * k3.Q + k4.Q));
  kahan_add(s.a1, comp.a1, w * (k1.a1 + 2.0 * k2.a1 + 2.0 * k3.a1 + k4.a1));
  kahan_add(s.a2, comp.a2, w * (k1.a2 + 2.0 * k2.a2 + 2.0 * k3.a2 + k4.a2));
}

double local_rate(const Profile& p, double t) { return 2.0 * std::abs(p.omega(t)) * p.n(t).norm(); }

long long interval_substeps(const Profile& p, double a, double b, double bound) {
  double rate = 0.0;
  constexpr int probes = 8;
  for (int k = 0; k <= probes; ++k) rate = std::max(rate, local_rate(p, a + (b - a) * k / probes));
  double m = std::ceil((b - a) * rate * 1.05 / bound);
  if (!std::isfinite(m)) return std::numeric_limits<long long>::max() / 4;
  return std::max(1LL, static_cast<long long>(m));
}

void check_grid(const Profile& p, const std::vector<double>& grid) {
  if (grid.empty()) throw Error(ErrorKind::InvalidGrid, "empty grid");
  if (grid.front() != 0.0) throw Error(ErrorKind::InvalidGrid, "grid must start at t = 0");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw Error(ErrorKind::InvalidGrid, "grid not increasing at node " + std::to_string(i));
  if (grid.back() > p.t_max * (1.0 + 1e-12))
    throw Error(ErrorKind::InvalidGrid, "grid exceeds profile t_max");
}

std::string at_node(std::size_t i, double t) {
  std::ostringstream os;
  os << "node " << i << " (t = " << t << ")";
  return os.str();
}

}  // namespace

long long planned_substeps(const Profile& p, const std::vector<double>& grid, double bound) {
  check_grid(p, grid);
  long long total = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    total += interval_substeps(p, grid[i - 1], grid[i], bound);
    if (total < 0 || total > std::numeric_limits<long long>::max() / 8)
      return std::numeric_limits<long long>::max() / 8;
  }
  return total;
}

Trajectory integrate(const Profile& p, const Vec3& e0, const std::vector<double>& grid,
                     const IntegrateOptions& opts) {
  check_grid(p, grid);
  if (!opts.raw_mode && !is_unit_timelike_upper(e0))
    throw Error(ErrorKind::NonUnitInitialVector, "e0 must be unit timelike upper (or use raw mode)");
  std::vector<long long> steps(grid.size(), 0);
  long long total = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    steps[i] = interval_substeps(p, grid[i - 1], grid[i], opts.step_bound);
    total += steps[i];
    if (total > opts.max_substeps)
      throw Error(ErrorKind::StepBudgetExceeded,
                  "step policy needs more than " + std::to_string(opts.max_substeps) +
                      " RK4 substeps by " + at_node(i, grid[i]));
  }

  Trajectory tr;
  tr.e0 = e0;
  tr.raw_mode = opts.raw_mode;
  tr.substeps = total;
  const std::size_t n = grid.size();
  tr.t = grid;
  tr.e.reserve(n);
  tr.E.reserve(n);
  tr.Eq.reserve(n);
  tr.A1.reserve(n);
  tr.A2.reserve(n);
  if (p.family) {
    tr.phi.reserve(n);
    for (double t : grid) tr.phi.push_back(p.phi(t));
  }

  State s{e0, Mat3::Identity(), Mat2::Identity(), 0.0, 0.0};
  State comp{Vec3::Zero(), Mat3::Zero(), Mat2::Zero(), 0.0, 0.0};
  const double c0 = msq(e0);
  auto record = [&](std::size_t i) {
    double drift = std::abs(msq(s.e) - c0);
    double gv = group_violation(s.Y);
    tr.drift_max = std::max(tr.drift_max, drift);
    tr.group_violation_max = std::max(tr.group_violation_max, gv);
    if (drift > opts.drift_tol)
      throw Error(ErrorKind::DriftExceeded,
                  "|e^2 - e0^2| = " + std::to_string(drift) + " at " + at_node(i, grid[i]));
    if (gv > opts.group_tol || std::abs(s.Y.determinant() - 1.0) > opts.group_tol)
      throw Error(ErrorKind::GroupViolation,
                  "|E^t g E - g| = " + std::to_string(gv) + " at " + at_node(i, grid[i]));
    tr.e.push_back(s.e);
    tr.E.push_back(s.Y);
    tr.Eq.push_back(s.Q);
    tr.A1.push_back(s.a1);
    tr.A2.push_back(s.a2);
  };
  record(0);
  for (std::size_t i = 1; i < n; ++i) {
    const double a = grid[i - 1], h = (grid[i] - a) / double(steps[i]);
    for (long long k = 0; k < steps[i]; ++k) rk4_step(p, a + double(k) * h, h, s, comp, opts.raw_mode);
    record(i);
  }
  return tr;
}

PhaseReport phases(const Trajectory& tr, double u0, std::size_t k) {
  if (tr.raw_mode || !is_unit_timelike_upper(tr.e0))
    throw Error(ErrorKind::NonUnitInitialVector, "phase accumulators need a unit timelike e0");
  if (!(u0 >= 0.5 - 1e-12)) throw Error(ErrorKind::InvalidU0, "u0 must be >= 1/2");
  if (k >= tr.size()) throw Error(ErrorKind::InvalidGrid, "tau index out of range");
  PhaseReport r;
  r.u0 = u0;
  r.hannay = -tr.A1[k];
  r.alpha_tau = tr.A1[k] - tr.A2[k];
  r.dynamical = -u0 * tr.A2[k];
  const double total = u0 * r.alpha_tau;
  r.total = wrap_angle(total);
  r.geometric = wrap_angle(total - r.dynamical);
  return r;
}

namespace {
// Generator direction of Q(xi, phi).
Vec3 b_phi(double phi) { return {-std::sin(phi), std::cos(phi), 0.0}; }
}  // namespace

Mat2 UDecomposition::quad() const {
  return quad_rep(-xi_t, b_phi(phi_t)) * quad_rep(2.0 * alpha_t, Vec3(0, 0, 1)) *
         quad_rep(xi_0, b_phi(phi_0));
}

UDecomposition u_decomposition(const Trajectory& tr, std::size_t k) {
  if (tr.raw_mode) throw Error(ErrorKind::NonUnitInitialVector, "raw trajectory has no phase data");
  if (k >= tr.size()) throw Error(ErrorKind::InvalidGrid, "index out of range");
  UDecomposition d;
  // Scale-aware tolerance: e(t) drifts with the integration error.
  double tol = std::max(1e-9, 10.0 * tr.drift_max);
  auto pt = vec_to_param(tr.e[k], tol).p;
  auto p0 = vec_to_param(tr.e0, tol).p;
  d.xi_t = pt.xi;
  d.phi_t = pt.phi;
  d.xi_0 = p0.xi;
  d.phi_0 = p0.phi;
  d.alpha_t = tr.A1[k] - tr.A2[k];
  return d;
}

namespace {

double frob_log(const Mat2& m) { return std::log(m.norm()); }

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}

}  // namespace

GrowthFit measure_growth(const FamilySpec& spec, const RegimeLabel& label,
                         const IntegrateOptions& opts) {
  FamilySpec s = spec;
  s.phase = PhaseFn::linear(1.0);
  GrowthFit g;
  std::size_t nodes = 2001;
  switch (label.kind) {
    case RegimeKind::Finite: {
      // A whole number of periods of |W_q| (period pi / Lambda).
      double period = label.Lambda > 0 ? std::numbers::pi / label.Lambda : 10.0;
      double k = std::max(8.0, std::ceil(40.0 / period));
      g.phi_lo = 0.0;
      g.phi_hi = k * period;
      nodes = static_cast<std::size_t>(k) * 64 + 1;
      break;
    }
    case RegimeKind::ExpOscillating:
      if (s.family == Family::B && label.Lambda > 0) {
        g.phi_lo = 4.0 / label.Lambda;
        g.phi_hi = 24.0 / label.Lambda;
      } else {
        g.phi_lo = 2.0;
        g.phi_hi = 12.0;
      }
      break;
    case RegimeKind::PolyOscillating:
      g.phi_lo = 10.0;
      g.phi_hi = 50.0;
      break;
    case RegimeKind::ExpInfinite:
      g.phi_lo = 2.0;
      g.phi_hi = 12.0;
      break;
  }
  Profile p = family_profile(s, g.phi_hi);
  IntegrateOptions o = opts;
  o.drift_tol = std::numeric_limits<double>::infinity();
  o.group_tol = std::numeric_limits<double>::infinity();
  Trajectory tr = integrate(p, Vec3(0, 0, 1), uniform_grid(g.phi_hi, nodes), o);
  std::vector<double> x, lx, y;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    double phi = tr.t[i];
    if (phi < g.phi_lo - 1e-12) continue;
    x.push_back(phi);
    lx.push_back(std::log(std::max(phi, 1e-300)));
    y.push_back(frob_log(tr.Eq[i]));
  }
  g.loglin_slope = ls_slope(x, y);
  g.loglog_slope = g.phi_lo > 0 ? ls_slope(lx, y) : std::numeric_limits<double>::quiet_NaN();
  switch (label.kind) {
    case RegimeKind::Finite: g.agrees = std::abs(g.loglin_slope) <= 0.05; break;
    case RegimeKind::ExpOscillating:
      g.agrees = s.family == Family::B
                     ? std::abs(g.loglin_slope - label.Lambda) <= 0.1 * label.Lambda
                     : g.loglin_slope > 0.05;
      break;
    case RegimeKind::PolyOscillating: g.agrees = std::abs(g.loglog_slope - 1.0) <= 0.1; break;
    case RegimeKind::ExpInfinite: g.agrees = g.loglin_slope > 0.05; break;
  }
  return g;
}

}  // namespace so21
