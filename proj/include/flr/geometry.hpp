#pragma once

// Rotation matrices, the canonical gyrokinetic coordinate change and its
// inverse, and the Cartesian filter map. All domain geometry lives on the
// periodic torus [0,2*pi)^2.

#include <array>
#include <cmath>

#include "flr/core.hpp"

namespace flr {

using Mat2 = std::array<std::array<double, 2>, 2>;
using Vec2 = std::array<double, 2>;

inline Vec2 mat_apply(const Mat2& m, const Vec2& v) {
  return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
}

inline Mat2 mat_mul(const Mat2& a, const Mat2& b) {
  Mat2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

// R(tau) = [[cos, sin], [-sin, cos]]: clockwise rotation by tau.
inline Mat2 rot_R(double tau) {
  const double c = std::cos(tau), s = std::sin(tau);
  return {{{c, s}, {-s, c}}};
}

// Script-R(tau) = [[sin, 1-cos], [cos-1, sin]]; satisfies d(scriptR)/dtau = R
// and scriptR(tau) = integral of R over [0,tau].
inline Mat2 rot_script_R(double tau) {
  const double c = std::cos(tau), s = std::sin(tau);
  return {{{s, 1.0 - c}, {c - 1.0, s}}};
}

// Discretized phase space (x1, x2, k, alpha): periodic torus in x, energy
// k in (0, k_max], uniform gyroangle. With k_offset on, k nodes are
// cell-centered, k_j = (j + 1/2) dk, keeping every node away from the
// 1/sqrt(2k) singularity.
struct GyroGrid {
  int n_x1 = 32;
  int n_x2 = 32;
  int n_k = 16;
  int n_alpha = 32;
  double k_max = 20.0;
  bool k_offset = true;

  double dx1() const { return two_pi / n_x1; }
  double dx2() const { return two_pi / n_x2; }
  double dk() const { return k_max / n_k; }
  double dalpha() const { return two_pi / n_alpha; }

  double x1_node(int i) const { return i * dx1(); }
  double x2_node(int i) const { return i * dx2(); }
  double k_node(int j) const { return k_offset ? (j + 0.5) * dk() : j * dk(); }
  double alpha_node(int l) const { return l * dalpha(); }

  // Phase-space quadrature weight (midpoint in k, rectangle elsewhere).
  double cell_weight() const { return dx1() * dx2() * dk() * dalpha(); }

  void validate() const {
    if (n_x1 < 2 || n_x2 < 2 || n_k < 2 || n_alpha < 2)
      throw ConfigError("GyroGrid: all counts must be >= 2");
    if (!(k_max > 0.0)) throw ConfigError("GyroGrid: k_max must be > 0");
  }
};

// Cartesian phase-space state (position on the torus, unbounded velocity).
struct CartState {
  Vec2 x_tilde{};
  Vec2 v_tilde{};
};

// Canonical gyrokinetic state: guiding center x, transverse energy k,
// gyroangle alpha. `degenerate` flags the v=0 point where alpha is fixed
// to 0 by convention.
struct GyroState {
  Vec2 x{};
  double k = 0.0;
  double alpha = 0.0;
  bool degenerate = false;
};

// x1 = x~1 + v~2, x2 = x~2 - v~1, k = |v~|^2/2, alpha = atan2(v~2, v~1).
inline GyroState cart_to_gyro(const CartState& s) {
  GyroState g;
  g.x = {wrap_2pi(s.x_tilde[0] + s.v_tilde[1]), wrap_2pi(s.x_tilde[1] - s.v_tilde[0])};
  g.k = 0.5 * (s.v_tilde[0] * s.v_tilde[0] + s.v_tilde[1] * s.v_tilde[1]);
  if (s.v_tilde[0] == 0.0 && s.v_tilde[1] == 0.0) {
    g.alpha = 0.0;
    g.degenerate = true;
  } else {
    g.alpha = wrap_2pi(std::atan2(s.v_tilde[1], s.v_tilde[0]));
  }
  return g;
}

// v~ = sqrt(2k)(cos a, sin a), x~1 = x1 - v~2, x~2 = x2 + v~1.
inline CartState gyro_to_cart(const GyroState& g) {
  if (g.k < 0.0) throw DomainError("gyro_to_cart: k must be >= 0");
  const double r = std::sqrt(2.0 * g.k);
  CartState s;
  s.v_tilde = {r * std::cos(g.alpha), r * std::sin(g.alpha)};
  s.x_tilde = {wrap_2pi(g.x[0] - s.v_tilde[1]), wrap_2pi(g.x[1] + s.v_tilde[0])};
  return s;
}

// Filter map of the two-scale decomposition in Cartesian variables:
// (x~, v~) -> (x~ + scriptR(-tau) v~, R(-tau) v~). In gyro coordinates this
// is the pure shift alpha -> alpha + tau with (x, k) unchanged.
inline CartState cartesian_filter_map(const Vec2& x_tilde, const Vec2& v_tilde, double tau) {
  CartState out;
  const Vec2 dx = mat_apply(rot_script_R(-tau), v_tilde);
  out.x_tilde = {wrap_2pi(x_tilde[0] + dx[0]), wrap_2pi(x_tilde[1] + dx[1])};
  out.v_tilde = mat_apply(rot_R(-tau), v_tilde);
  return out;
}

}  // namespace flr
