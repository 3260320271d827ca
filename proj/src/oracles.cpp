#include "so21osc/oracles.hpp"

#include <cmath>
#include <functional>

namespace so21 {

namespace blocks {

Mat3 R(double phi) {
  double c = std::cos(2 * phi), s = std::sin(2 * phi);
  Mat3 m;
  m << c, -s, 0, s, c, 0, 0, 0, 1;
  return m;
}

Mat3 S(double xi, int eps) {
  double c = std::cosh(xi), s = std::sinh(xi);
  Mat3 m;
  m << eps * c, 0, s, 0, 1, 0, s, 0, eps * c;
  return m;
}

Mat3 T(double phi) {
  double c = std::cosh(2 * phi), s = std::sinh(2 * phi);
  Mat3 m;
  m << 1, 0, 0, 0, c, s, 0, s, c;
  return m;
}

Mat2 Rq(double phi) {
  Mat2 m;
  m << std::cos(phi), std::sin(phi), -std::sin(phi), std::cos(phi);
  return m;
}

Mat2 Tq(double phi) {
  Mat2 m;
  m << std::cosh(phi), -std::sinh(phi), -std::sinh(phi), std::cosh(phi);
  return m;
}

Mat3 W_plus(double L, double phi) { return R(L * phi); }

Mat3 W_minus(double L, double phi) {
  double c = std::cosh(2 * L * phi), s = std::sinh(2 * L * phi);
  Mat3 m;
  m << 1, 0, 0, 0, c, -s, 0, -s, c;
  return m;
}

Mat2 Wq_plus(double L, double xi, int eps, double phi) {
  double c = std::cos(L * phi), s = std::sin(L * phi);
  Mat2 m;
  m << c, eps * std::exp(eps * xi) * s, -eps * std::exp(-eps * xi) * s, c;
  return m;
}

Mat2 Wq_minus(double L, double xi, int eps, double phi) {
  double c = std::cosh(L * phi), s = std::sinh(L * phi);
  Mat2 m;
  m << c, eps * std::exp(eps * xi) * s, eps * std::exp(-eps * xi) * s, c;
  return m;
}

Mat3 D_poly(double a, int eps, double phi) {
  double ap = a * phi, aap = a * a * phi * phi;
  Mat3 m;
  m << 1 - 2 * aap, -2 * eps * ap, 2 * eps * aap,
       2 * eps * ap, 1, -2 * ap,
       -2 * eps * aap, -2 * ap, 1 + 2 * aap;
  return m;
}

Mat2 Wq_poly(double a, int eps, double phi) {
  Mat2 m;
  m << 1, (1 + eps) * a * phi, (1 - eps) * a * phi, 1;
  return m;
}

Mat2 Wq_d(double L, double phi) {
  double c = std::cosh(L * phi), s = std::sinh(L * phi);
  Mat2 m;
  m << c, s, s, c;
  return m;
}

}  // namespace blocks

using namespace blocks;

namespace {

// Family A reduced to a unit direction and an effective phase.
struct AForm {
  Nature nature;
  double xi_n = 0.0, phi_n = 0.0, phi_eff = 0.0;
};

AForm family_a(const FamilySpec& s, double phi) {
  AForm f;
  Vec3 n(s.n1, s.n2, s.n3);
  f.nature = family_nature(s);
  f.phi_eff = s.lambda * phi;
  if (f.nature == Nature::Elliptic) {
    if (n[2] < 0) {
      n = -n;
      f.phi_eff = -f.phi_eff;
    }
    f.xi_n = std::asinh(std::hypot(n[0], n[1]));
  } else if (f.nature == Nature::Hyperbolic) {
    f.xi_n = std::asinh(n[2]);
  } else {
    f.phi_eff *= n[2];
    n /= n[2];
  }
  f.phi_n = 0.5 * std::atan2(n[1], n[0]);
  return f;
}

Mat3 rot3(Family f, double phi) { return f == Family::B ? R(phi) : T(phi); }
Mat2 rot2(Family f, double phi) { return f == Family::B ? Rq(phi) : Tq(phi); }

}  // namespace

Mat3 oracle_E(const FamilySpec& s, double phi) {
  if (s.family == Family::A) {
    AForm a = family_a(s, phi);
    Mat3 Rn = R(a.phi_n), Rinv = Rn.transpose();
    switch (a.nature) {
      case Nature::Elliptic:
        return Rn * S(a.xi_n, 1) * W_plus(1.0, a.phi_eff) * S(a.xi_n, 1).inverse() * Rinv;
      case Nature::Hyperbolic:
        return Rn * S(a.xi_n, 1) * W_minus(1.0, a.phi_eff) * S(a.xi_n, 1).inverse() * Rinv;
      case Nature::Critical:
        return Rn * D_poly(1.0, 1, a.phi_eff) * Rinv;
    }
  }
  RegimeLabel r = regime(s);
  if (s.family == Family::D)
    return T(phi) * R(r.phi_n) * W_minus(r.Lambda, phi) * R(r.phi_n).transpose();
  Mat3 pre = rot3(s.family, phi);
  switch (r.branch) {
    case 1: {
      Mat3 Sm = S(r.xi_n, r.epsilon);
      return pre * Sm * W_plus(r.Lambda, phi) * Sm.inverse();
    }
    case 2: {
      Mat3 Sm = S(r.xi_n, r.epsilon);
      return pre * Sm * W_minus(r.Lambda, phi) * Sm.inverse();
    }
    default:
      return pre * D_poly(r.lambda_nf[0], r.epsilon, phi);
  }
}

Mat2 oracle_Eq(const FamilySpec& s, double phi) {
  if (s.family == Family::A) {
    AForm a = family_a(s, phi);
    Mat2 Rn = Rq(a.phi_n), Rinv = Rn.transpose();
    switch (a.nature) {
      case Nature::Elliptic: return Rn * Wq_plus(1.0, a.xi_n, 1, a.phi_eff) * Rinv;
      case Nature::Hyperbolic: return Rn * Wq_minus(1.0, a.xi_n, 1, a.phi_eff) * Rinv;
      case Nature::Critical: {
        Mat2 w;
        w << 1, 2 * a.phi_eff, 0, 1;
        return Rn * w * Rinv;
      }
    }
  }
  RegimeLabel r = regime(s);
  if (s.family == Family::D)
    return Tq(phi) * Rq(r.phi_n) * Wq_d(r.Lambda, phi) * Rq(r.phi_n).transpose();
  Mat2 pre = rot2(s.family, phi);
  switch (r.branch) {
    case 1: return pre * Wq_plus(r.Lambda, r.xi_n, r.epsilon, phi);
    case 2: return pre * Wq_minus(r.Lambda, r.xi_n, r.epsilon, phi);
    default: return pre * Wq_poly(r.lambda_nf[0], r.epsilon, phi);
  }
}

std::pair<Vec3, double> oracle_eta(const FamilySpec& s, double p) {
  using std::atan;
  using std::cos;
  using std::cosh;
  using std::sin;
  using std::sinh;
  using std::tan;
  using std::tanh;
  if (s.family == Family::A) {
    Vec3 n(s.n1, s.n2, s.n3);
    return {n, msq(n)};
  }
  RegimeLabel r = regime(s);
  const double L = r.Lambda, x = r.xi_n;
  const int e = r.epsilon;
  auto sq = [](double v) { return v * v; };
  if (s.family == Family::D) {
    double c2 = cos(2 * r.phi_n), s2 = sin(2 * r.phi_n);
    double first = c2 * cosh(p) * sinh(L * p) - sinh(p) * cosh(L * p);
    Vec3 eta(first, s2 * cosh(p) * sinh(L * p), s2 * sinh(p) * sinh(L * p));
    return {eta, -sq(s2 * sinh(L * p)) - sq(first)};
  }
  if (s.family == Family::B) {
    switch (r.branch) {
      case 1: {
        Vec3 eta(e * sinh(x) * sin(L * p) * cos(p), e * sinh(x) * sin(L * p) * sin(p),
                 cosh(x) * sin(L * p) * cos(p) + e * cos(L * p) * sin(p));
        double es = (sq(sinh(x) * sin(L * p)) + 1) * sq(sin(p + e * atan(cosh(x) * tan(L * p)))) -
                    sq(sinh(x) * sin(L * p));
        return {eta, es};
      }
      case 2: {
        Vec3 eta(e * cosh(x) * sinh(L * p) * cos(p), e * cosh(x) * sinh(L * p) * sin(p),
                 sinh(x) * sinh(L * p) * cos(p) + cosh(L * p) * sin(p));
        double es = (sq(cosh(x) * sinh(L * p)) + 1) * sq(sin(p + atan(sinh(x) * tanh(L * p)))) -
                    sq(cosh(x) * sinh(L * p));
        return {eta, es};
      }
      default: {
        double a = r.lambda_nf[0];
        Vec3 eta(a * p * cos(p), a * p * sin(p), e * a * p * cos(p) + sin(p));
        double es = (a * a * p * p + 1) * sq(sin(p + e * atan(a * p))) - a * a * p * p;
        return {eta, es};
      }
    }
  }
  switch (r.branch) {
    case 1: {
      Vec3 eta(e * (sinh(x) * cosh(p) * sin(L * p) - sinh(p) * cos(L * p)),
               cosh(x) * sinh(p) * sin(L * p), cosh(x) * cosh(p) * sin(L * p));
      double es = sq(cosh(x) * sin(L * p)) -
                  (sq(cosh(x) * cosh(p)) - 1) * sq(sin(L * p - atan(tanh(p) / sinh(x))));
      return {eta, es};
    }
    case 2: {
      Vec3 eta(e * cosh(x) * cosh(p) * sinh(L * p) - sinh(p) * cosh(L * p),
               sinh(x) * sinh(p) * sinh(L * p), sinh(x) * cosh(p) * sinh(L * p));
      double es = sq(sinh(x) * sinh(L * p)) -
                  sq(cosh(x) * cosh(p) * sinh(L * p) - e * sinh(p) * cosh(L * p));
      return {eta, es};
    }
    default: {
      double ln3 = s.lambda * s.n3;
      Vec3 eta(e * ln3 * p * cosh(p) - sinh(p), ln3 * p * sinh(p), ln3 * p * cosh(p));
      double es = sq(ln3 * p) - sq(e * ln3 * p * cosh(p) - sinh(p));
      return {eta, es};
    }
  }
}

double eta_sq_c2_alt(const FamilySpec& s, double p) {
  RegimeLabel r = regime(s);
  if (s.family != Family::C || r.branch != 2 || r.epsilon != 1)
    throw Error(ErrorKind::InvalidFamilyParams, "alternate form needs family C, case 2, eps=+1");
  const double L = r.Lambda, x = r.xi_n;
  double a = std::sinh(x) * std::sinh(L * p);
  double b = std::sinh(L * p - std::atanh(std::tanh(p) / std::cosh(x)));
  double c = std::sinh(x) * std::cosh(p);
  return a * a - (c * c + 1) * b * b;
}

OracleEval oracle_eval(const FamilySpec& s, double phi) {
  OracleEval o;
  o.phi = phi;
  o.E = oracle_E(s, phi);
  o.Eq = oracle_Eq(s, phi);
  auto [eta, es] = oracle_eta(s, phi);
  o.eta = eta;
  o.eta_sq = es;
  return o;
}

Mat2 Decomposition::quad(double phi) const {
  Mat2 pre = prefactor == Prefactor::K3 ? quad_rep(-2 * phi, Vec3(0, 0, 1))
                                        : quad_rep(2 * phi, Vec3(1, 0, 0));
  Mat2 rest = Lambda > 0.0 ? quad_rep(-2 * Lambda * phi, n_f) : quad_rep(-2 * phi, lambda_nf);
  return pre * rest;
}

Decomposition oracle_decomposition(const FamilySpec& s) {
  if (s.family == Family::A)
    throw Error(ErrorKind::UnsupportedFamily,
                "family A propagates as a single factor exp(-i phi K.n^g)");
  RegimeLabel r = regime(s);
  Decomposition d;
  d.prefactor = s.family == Family::B ? Prefactor::K3 : Prefactor::K1;
  d.Lambda = r.Lambda;
  d.lambda_nf = r.lambda_nf;
  d.n_f = r.Lambda > 0.0 ? Vec3(r.lambda_nf / r.Lambda) : r.lambda_nf;
  return d;
}

std::vector<double> transcendental_roots(RootFamily which, double L, double xi, double c,
                                         double lo, double hi) {
  std::function<double(double)> f;
  switch (which) {
    case RootFamily::TanOverTanh:
      // tan(L p) sinh(xi) cosh(p) = sinh(p) cos(L p) after clearing the poles.
      f = [=](double p) {
        return std::sin(L * p) * std::sinh(xi) * std::cosh(p) - std::cos(L * p) * std::sinh(p);
      };
      break;
    case RootFamily::TanhRatio:
      f = [=](double p) { return std::tanh(p) - std::cosh(xi) * std::tanh(L * p); };
      break;
    case RootFamily::TanhLinear:
      f = [=](double p) { return std::tanh(p) - c * p; };
      break;
  }
  std::vector<double> roots;
  if (!(hi > lo)) return roots;
  constexpr double h = 0.01;
  const long n = static_cast<long>(std::ceil((hi - lo) / h));
  double a = lo, fa = f(lo);
  for (long k = 1; k <= n; ++k) {
    double b = std::min(hi, lo + k * h), fb = f(b);
    if (fb == 0.0) {
      roots.push_back(b);
    } else if (fa != 0.0 && (fa < 0.0) != (fb < 0.0)) {
      double x0 = a, x1 = b, f0 = fa;
      while (x1 - x0 > 1e-12) {
        double m = 0.5 * (x0 + x1), fm = f(m);
        if ((fm < 0.0) == (f0 < 0.0)) {
          x0 = m;
          f0 = fm;
        } else {
          x1 = m;
        }
      }
      roots.push_back(0.5 * (x0 + x1));
    }
    a = b;
    fa = fb;
  }
  return roots;
}

std::vector<double> transcendental_roots(const FamilySpec& s, RootFamily which, double lo,
                                         double hi) {
  RegimeLabel r = regime(s);
  double c = r.epsilon * s.lambda * s.n3;
  return transcendental_roots(which, r.Lambda, r.xi_n, c, lo, hi);
}

}  // namespace so21
