#pragma once

// Exhaustive search for a unit timelike v with E v = v. Independent of the
// SVD path in cyclic.cpp: a (xi, phi) mesh, then damped Gauss-Newton from the
// best mesh points in (v1, v2) coordinates, which are regular at the apex.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "so21osc/so21_core.hpp"

namespace bf {

struct Hit {
  bool found = false;
  double residual = 1e300;  // |E v - v| / |v|
  double xi = 0, phi = 0;
};

inline so21::Vec3 lift(double x, double y) { return {x, y, std::sqrt(1 + x * x + y * y)}; }

inline double residual_xy(const so21::Mat3& E, double x, double y) {
  so21::Vec3 v = lift(x, y);
  return (E * v - v).norm() / v.norm();
}

inline Hit search(const so21::Mat3& E, double threshold = 1e-6, int mesh = 100,
                  double xi_mesh_max = 6.0, double xi_cap = 12.0) {
  constexpr double two_pi = 2 * std::numbers::pi;
  const double dxi = xi_mesh_max / (mesh - 1), dphi = two_pi / mesh;
  struct Cand {
    double r, x, y;
  };
  std::vector<Cand> all;
  all.reserve(mesh * mesh);
  for (int i = 0; i < mesh; ++i)
    for (int j = 0; j < mesh; ++j) {
      double s = std::sinh(i * dxi), x = s * std::cos(j * dphi), y = s * std::sin(j * dphi);
      all.push_back({residual_xy(E, x, y), x, y});
    }
  std::sort(all.begin(), all.end(), [](const Cand& a, const Cand& b) { return a.r < b.r; });

  const double s_cap = std::sinh(xi_cap);
  auto res_vec = [&](double x, double y) {
    so21::Vec3 v = lift(x, y);
    return so21::Vec3((E * v - v) / v.norm());
  };
  Hit best;
  const int seeds = 8;
  for (int s = 0; s < seeds && s < int(all.size()); ++s) {
    double x = all[s].x, y = all[s].y, r = all[s].r;
    double mu = 1e-3;
    for (int it = 0; it < 200 && r > threshold * 1e-3; ++it) {
      so21::Vec3 f = res_vec(x, y);
      double hx = 1e-7 * std::max(1.0, std::abs(x)), hy = 1e-7 * std::max(1.0, std::abs(y));
      Eigen::Matrix<double, 3, 2> J;
      J.col(0) = (res_vec(x + hx, y) - res_vec(x - hx, y)) / (2 * hx);
      J.col(1) = (res_vec(x, y + hy) - res_vec(x, y - hy)) / (2 * hy);
      Eigen::Matrix2d A = J.transpose() * J;
      A.diagonal() *= 1 + mu;
      Eigen::Vector2d step = A.ldlt().solve(-J.transpose() * f);
      double nx = x + step[0], ny = y + step[1];
      if (std::hypot(nx, ny) > s_cap || !std::isfinite(nx) || !std::isfinite(ny)) {
        mu *= 10;
        if (mu > 1e12) break;
        continue;
      }
      double nr = residual_xy(E, nx, ny);
      if (nr < r) {
        x = nx, y = ny, r = nr;
        mu = std::max(mu / 10, 1e-12);
      } else {
        mu *= 10;
        if (mu > 1e12) break;
      }
    }
    if (r < best.residual) best = {false, r, std::asinh(std::hypot(x, y)), std::atan2(y, x)};
  }
  best.found = best.residual <= threshold;
  return best;
}

}  // namespace bf
