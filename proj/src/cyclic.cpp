#include "so21osc/cyclic.hpp"

#include <cmath>
#include <numbers>

namespace so21 {

const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::NoneExist: return "NoneExist";
    case VerdictKind::Denumerable: return "Denumerable";
    case VerdictKind::AllDefiniteParity: return "AllDefiniteParity";
    case VerdictKind::AllStates: return "AllStates";
  }
  return "?";
}

FixedVectorResult fixed_vector(const Mat3& E, double tol) {
  const double scale = std::max(1.0, E.norm());
  Eigen::JacobiSVD<Mat3> svd(E - Mat3::Identity(), Eigen::ComputeFullV);
  const Vec3 sv = svd.singularValues();  // descending
  if (sv[2] > 1e-6 * scale)
    throw Error(ErrorKind::NoUnitEigenvalue,
                "smallest singular value of E - 1 is " + std::to_string(sv[2]));

  FixedVectorResult r;
  r.multiplicity = 0;
  for (int i = 0; i < 3; ++i)
    if (sv[i] <= tol * scale) ++r.multiplicity;
  r.multiplicity = std::max(r.multiplicity, 1);

  // Pick the null-space direction with the largest Minkowski square.
  const int k = r.multiplicity;
  Eigen::MatrixXd N = svd.matrixV().rightCols(k);
  Eigen::MatrixXd G = N.transpose() * metric() * N;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  Vec3 eta = N * es.eigenvectors().col(k - 1);
  eta.normalize();
  r.eta_sq = msq(eta);
  if (r.eta_sq > tol) {
    if (eta[2] < 0) eta = -eta;
    eta /= std::sqrt(msq(eta));
  } else {
    Eigen::Index i;
    eta.cwiseAbs().maxCoeff(&i);
    if (eta[i] < 0) eta = -eta;
  }
  r.eta = eta;

  // All eigenvalues are 1 exactly when the trace is 3.
  r.algebraic_multiplicity = std::abs(E.trace() - 3.0) <= 1e-8 * scale ? 3 : 1;
  r.defective = r.algebraic_multiplicity > r.multiplicity;
  return r;
}

CyclicVerdict verdict(const Mat3& E, const Mat2& Eq, const AlphaFn& alpha_fn,
                      double special_tol, double tol) {
  constexpr double pi = std::numbers::pi;
  FixedVectorResult fv = fixed_vector(E, tol);
  CyclicVerdict v;
  v.eta = fv.eta;
  v.eta_sq = fv.eta_sq;
  if (max_abs(Eq - Mat2::Identity()) <= special_tol) {
    v.kind = VerdictKind::AllStates;
    v.alpha_tau = alpha_fn(Vec3(0, 0, 1));
    v.N = std::lround(*v.alpha_tau / (2 * pi));
  } else if (max_abs(Eq + Mat2::Identity()) <= special_tol) {
    v.kind = VerdictKind::AllDefiniteParity;
    v.alpha_tau = alpha_fn(Vec3(0, 0, 1));
    long N = std::lround((*v.alpha_tau / pi - 1.0) / 2.0);
    v.N = N;
    double d = (double(N) + 0.5) * pi;
    v.parity_phases = std::make_pair(wrap_angle(d), wrap_angle(-d));
  } else if (fv.eta_sq > tol) {
    v.kind = VerdictKind::Denumerable;
    v.alpha_tau = alpha_fn(fv.eta);
  } else {
    v.kind = VerdictKind::NoneExist;
    v.boundary = std::abs(fv.eta_sq) <= tol;
  }
  return v;
}

std::pair<double, double> denumerable_phases(int n, double alpha_tau, double hannay) {
  const double k = n + 0.5;
  return {wrap_angle(k * alpha_tau), wrap_angle(-k * hannay)};
}

namespace {
void check_u0(double u0) {
  if (!(u0 >= 0.5 - 1e-12)) throw Error(ErrorKind::InvalidU0, "u0 must be >= 1/2");
}
}  // namespace

double general_geometric_phase(double u0, double hannay, const EvenCase& c) {
  check_u0(u0);
  return wrap_angle(-u0 * hannay - (u0 - 0.5) * 2.0 * double(c.N) * std::numbers::pi);
}

double general_geometric_phase(double u0, double hannay, const OddCase& c) {
  check_u0(u0);
  if (c.parity != 1 && c.parity != -1) throw Error(ErrorKind::BadInput, "parity must be +1 or -1");
  return wrap_angle(-u0 * hannay -
                    (u0 - 0.5 * c.parity) * (2.0 * double(c.N) + 1.0) * std::numbers::pi);
}

double general_geometric_phase(double u0, double hannay, const RationalCase& c) {
  check_u0(u0);
  double expected = 2.0 * double(c.s0 * c.s_bar) + 0.5;
  if (std::abs(u0 - expected) > 1e-9)
    throw Error(ErrorKind::InvalidU0, "rational case needs u0 = 2 s0 s_bar + 1/2");
  return wrap_angle(-u0 * hannay - 2.0 * double(c.r0 * c.s_bar) * std::numbers::pi);
}

std::optional<std::pair<long, long>> rational_alpha(double alpha_tau, long max_den) {
  if (max_den < 1) throw Error(ErrorKind::BadInput, "max_den must be >= 1");
  const double x = alpha_tau / std::numbers::pi;
  if (!std::isfinite(x)) return std::nullopt;
  // Convergents h/k of the continued fraction of x.
  long h0 = 1, h1 = static_cast<long>(std::floor(x)), k0 = 0, k1 = 1;
  double frac = x - std::floor(x);
  std::optional<std::pair<long, long>> best;
  for (int it = 0; it < 64; ++it) {
    if (k1 > max_den) break;
    if (std::abs(x - double(h1) / double(k1)) <= 1e-9) {
      best = std::make_pair(h1, k1);
      break;
    }
    if (frac < 1e-15) break;
    double inv = 1.0 / frac;
    long a = static_cast<long>(std::floor(inv));
    frac = inv - double(a);
    long h2 = a * h1 + h0, k2 = a * k1 + k0;
    h0 = h1;
    k0 = k1;
    h1 = h2;
    k1 = k2;
  }
  return best;
}

}  // namespace so21
