#include "so21osc/wavepacket.hpp"

#include <cmath>

namespace so21 {

Vec3 mean_vector(double x, double p) { return {0.5 * (x * x - p * p), -x * p, 0.5 * (x * x + p * p)}; }

void check_state(const MomentState& s, double tol) {
  const double scale = std::max(1.0, s.u.squaredNorm());
  if (msq(s.u) < 0.25 - tol * scale || !(s.u[2] > 0.0))
    throw Error(ErrorKind::UncertaintyViolated, "u^2 = " + std::to_string(msq(s.u)) + " < 1/4");
  Vec3 w = s.u - mean_vector(s.xbar, s.pbar);
  if (w[2] < std::abs(w[0]) - tol * std::max(1.0, w.norm()))
    throw Error(ErrorKind::NegativeVariance, "w3 < |w1|");
}

MomentState eigenstate_moments(int n, const Vec3& e0, double tol) {
  if (n < 0) throw Error(ErrorKind::BadInput, "n_index must be >= 0");
  if (!is_unit_timelike_upper(e0, tol))
    throw Error(ErrorKind::NotOnHyperboloid, "e0 must be unit timelike upper");
  MomentState s;
  s.u = (n + 0.5) * e0;
  return s;
}

MomentState squeezed_state(double u0, const Vec3& e0, double tol) {
  if (!(u0 >= 0.5 - 1e-12)) throw Error(ErrorKind::InvalidU0, "u0 must be >= 1/2");
  if (!is_unit_timelike_upper(e0, tol))
    throw Error(ErrorKind::NotOnHyperboloid, "e0 must be unit timelike upper");
  MomentState s;
  s.u = u0 * e0;
  return s;
}

MomentState evolve_state(const MomentState& s, const Mat3& E, const Mat2& Eq, double tol) {
  MomentState r;
  Vec2 q = Eq * Vec2(s.xbar, s.pbar);
  r.xbar = q[0];
  r.pbar = q[1];
  r.u = E * s.u;
  check_state(r, tol);
  return r;
}

Variances variances(const MomentState& s, double tol) {
  Vec3 w = s.u - mean_vector(s.xbar, s.pbar);
  const double slack = tol * std::max(1.0, w.norm());
  double vx = w[2] + w[0], vp = w[2] - w[0];
  if (vx < -slack || vp < -slack)
    throw Error(ErrorKind::NegativeVariance,
                "dx^2 = " + std::to_string(vx) + ", dp^2 = " + std::to_string(vp));
  return {std::sqrt(std::max(vx, 0.0)), std::sqrt(std::max(vp, 0.0)), -w[1]};
}

EllipseCoeffs classical_ellipse(const Vec3& e, double I, double tol) {
  if (!is_unit_timelike_upper(e, tol))
    throw Error(ErrorKind::NotOnHyperboloid, "e must be unit timelike upper");
  if (!(I > 0.0)) throw Error(ErrorKind::NonpositiveAction, "I must be positive");
  return {e[2] + e[0], 2.0 * e[1], e[2] - e[0], I};
}

std::vector<std::array<double, 2>> sample_orbit(const EllipseCoeffs& c,
                                                const std::vector<double>& theta) {
  const double sp = c.A_pp;  // e3 + e1
  const double e2 = 0.5 * c.A_qp;
  std::vector<std::array<double, 2>> pts;
  pts.reserve(theta.size());
  const double qa = std::sqrt(2.0 * c.I_action * sp), pa = std::sqrt(2.0 * c.I_action / sp);
  for (double th : theta)
    pts.push_back({qa * std::cos(th), -pa * (e2 * std::cos(th) + std::sin(th))});
  return pts;
}

double shoelace_area(const std::vector<std::array<double, 2>>& pts) {
  double a = 0.0;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = pts[i];
    const auto& q = pts[(i + 1) % n];
    a += p[0] * q[1] - q[0] * p[1];
  }
  return 0.5 * std::abs(a);
}

double hannay_from_loop(const std::vector<Vec3>& loop, double I) {
  if (!(I > 0.0)) throw Error(ErrorKind::NonpositiveAction, "I must be positive");
  if (loop.size() < 3) throw Error(ErrorKind::BadInput, "loop needs at least three points");
  // Green's theorem with dG/de1 = 1/e3 on the projection.
  auto G = [](const Vec3& e) { return std::asinh(e[0] / std::sqrt(1.0 + e[1] * e[1])); };
  double circ = 0.0;
  const std::size_t n = loop.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    circ += 0.5 * (G(loop[i]) + G(loop[i + 1])) * (loop[i + 1][1] - loop[i][1]);
  if ((loop.back() - loop.front()).norm() > 0.0)
    circ += 0.5 * (G(loop.back()) + G(loop.front())) * (loop.front()[1] - loop.back()[1]);
  // Contour-averaged dp^dq = I de1^de2 / (2 e3).
  auto area = [&](double action) { return 0.5 * action * circ; };
  const double d = 1e-3 * I;
  return -(area(I + d) - area(I - d)) / (2.0 * d);
}

}  // namespace so21
