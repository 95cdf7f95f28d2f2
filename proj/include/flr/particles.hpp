#pragma once

// Cartesian characteristics pusher: exact gyration (variation of constants)
// Strang-composed with the electric-field kick. Used as an independent
// oracle for the grid solver and for adiabatic-invariant diagnostics.

#include <cmath>
#include <functional>
#include <vector>

#include "flr/core.hpp"
#include "flr/fields.hpp"
#include "flr/geometry.hpp"
#include "flr/interp.hpp"

namespace flr {

// Phase-space markers (x~, v~) with weights.
struct ParticleEnsemble {
  std::vector<double> x1, x2, v1, v2, w;
  double eps = 0.1;
  double time = 0.0;

  std::size_t size() const { return x1.size(); }

  void add(double px1, double px2, double pv1, double pv2, double pw = 1.0) {
    x1.push_back(wrap_2pi(px1));
    x2.push_back(wrap_2pi(px2));
    v1.push_back(pv1);
    v2.push_back(pv2);
    w.push_back(pw);
  }

  double k_of(std::size_t p) const { return 0.5 * (v1[p] * v1[p] + v2[p] * v2[p]); }
  Vec2 guiding_center(std::size_t p) const {
    return {wrap_2pi(x1[p] + v2[p]), wrap_2pi(x2[p] - v1[p])};
  }
};

using FieldEval = std::function<Vec2(double x1, double x2, double t)>;

inline FieldEval field_evaluator(const Field2D& field) {
  return [&field](double x1, double x2, double) -> Vec2 {
    return {interp_periodic2(field.e1, wrap_2pi(x1), wrap_2pi(x2)),
            interp_periodic2(field.e2, wrap_2pi(x1), wrap_2pi(x2))};
  };
}

// One step of the splitting integrator: half kick, exact rotation
// V <- R(dt/eps) V, X <- X + scriptR(dt/eps) V, half kick. Exact when E = 0.
inline void push_particles_cartesian(ParticleEnsemble& p, const FieldEval& field, double dt) {
  if (!(dt > 0.0)) throw DomainError("push_particles_cartesian: dt must be > 0");
  const double tau = dt / p.eps;
  const Mat2 rot = rot_R(tau);
  const Mat2 drift = rot_script_R(tau);
  for (std::size_t i = 0; i < p.size(); ++i) {
    Vec2 e = field(p.x1[i], p.x2[i], p.time);
    double v1 = p.v1[i] + 0.5 * dt * e[0];
    double v2 = p.v2[i] + 0.5 * dt * e[1];
    const double nx1 = p.x1[i] + drift[0][0] * v1 + drift[0][1] * v2;
    const double nx2 = p.x2[i] + drift[1][0] * v1 + drift[1][1] * v2;
    // Rotate in extended precision and re-enforce the exactly preserved |v|,
    // so rounding cannot accumulate a secular drift of the kinetic invariant.
    const long double l1 = static_cast<long double>(rot[0][0]) * v1 +
                           static_cast<long double>(rot[0][1]) * v2;
    const long double l2 = static_cast<long double>(rot[1][0]) * v1 +
                           static_cast<long double>(rot[1][1]) * v2;
    const long double n_before = static_cast<long double>(v1) * v1 +
                                 static_cast<long double>(v2) * v2;
    const long double n_after = l1 * l1 + l2 * l2;
    const long double scale = n_after > 0.0L ? std::sqrt(n_before / n_after) : 1.0L;
    double nv1 = static_cast<double>(l1 * scale);
    double nv2 = static_cast<double>(l2 * scale);
    e = field(nx1, nx2, p.time + dt);
    p.x1[i] = wrap_2pi(nx1);
    p.x2[i] = wrap_2pi(nx2);
    p.v1[i] = nv1 + 0.5 * dt * e[0];
    p.v2[i] = nv2 + 0.5 * dt * e[1];
  }
  p.time += dt;
}

// Classical RK4 on the stiff characteristic system
//   dX/dt = V/eps,  dV/dt = E(X, t) + (V2, -V1)/eps.
// Reference integrator for the pusher; run it with small steps.
inline void push_particles_rk4(ParticleEnsemble& p, const FieldEval& field, double dt) {
  struct State {
    double x1, x2, v1, v2;
  };
  auto rhs = [&](const State& s, double t) -> State {
    const Vec2 e = field(s.x1, s.x2, t);
    return {s.v1 / p.eps, s.v2 / p.eps, e[0] + s.v2 / p.eps, e[1] - s.v1 / p.eps};
  };
  for (std::size_t i = 0; i < p.size(); ++i) {
    State s{p.x1[i], p.x2[i], p.v1[i], p.v2[i]};
    const double t = p.time;
    const State k1 = rhs(s, t);
    const State s2{s.x1 + 0.5 * dt * k1.x1, s.x2 + 0.5 * dt * k1.x2,
                   s.v1 + 0.5 * dt * k1.v1, s.v2 + 0.5 * dt * k1.v2};
    const State k2 = rhs(s2, t + 0.5 * dt);
    const State s3{s.x1 + 0.5 * dt * k2.x1, s.x2 + 0.5 * dt * k2.x2,
                   s.v1 + 0.5 * dt * k2.v1, s.v2 + 0.5 * dt * k2.v2};
    const State k3 = rhs(s3, t + 0.5 * dt);
    const State s4{s.x1 + dt * k3.x1, s.x2 + dt * k3.x2, s.v1 + dt * k3.v1,
                   s.v2 + dt * k3.v2};
    const State k4 = rhs(s4, t + dt);
    p.x1[i] = wrap_2pi(s.x1 + dt / 6.0 * (k1.x1 + 2 * k2.x1 + 2 * k3.x1 + k4.x1));
    p.x2[i] = wrap_2pi(s.x2 + dt / 6.0 * (k1.x2 + 2 * k2.x2 + 2 * k3.x2 + k4.x2));
    p.v1[i] = s.v1 + dt / 6.0 * (k1.v1 + 2 * k2.v1 + 2 * k3.v1 + k4.v1);
    p.v2[i] = s.v2 + dt / 6.0 * (k1.v2 + 2 * k2.v2 + 2 * k3.v2 + k4.v2);
  }
  p.time += dt;
}

}  // namespace flr
