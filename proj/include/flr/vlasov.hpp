#pragma once

// Time integration of the eps-dependent Vlasov-Poisson system in canonical
// gyrokinetic coordinates. The stiff 1/eps term is an exact gyroangle shift;
// the field advection is an unsplit 4D semi-Lagrangian step.

#include <cmath>
#include <functional>

#include "flr/core.hpp"
#include "flr/fields.hpp"
#include "flr/geometry.hpp"
#include "flr/interp.hpp"
#include "flr/spectral.hpp"

namespace flr {

// Cartesian initial datum f~0(x~1, x~2, v~1, v~2).
using CartDensity = std::function<double(double, double, double, double)>;

// Fraction of |f~0| mass beyond the k_max cutoff, estimated on a refined
// k grid over [0, k_max + tail].
inline double truncated_mass_fraction(const CartDensity& f0, const GyroGrid& g,
                                      double tail = 40.0, int n_fine = 256) {
  double total = 0.0, beyond = 0.0;
  const double k_hi = g.k_max + tail;
  const double dk = k_hi / n_fine;
  for (int j = 0; j < n_fine; ++j) {
    const double k = (j + 0.5) * dk;
    const double r = std::sqrt(2.0 * k);
    double ring = 0.0;
    for (int l = 0; l < g.n_alpha; ++l) {
      const double a = g.alpha_node(l);
      const double v1 = r * std::cos(a), v2 = r * std::sin(a);
      for (int i1 = 0; i1 < g.n_x1; ++i1)
        for (int i2 = 0; i2 < g.n_x2; ++i2)
          ring += std::abs(f0(wrap_2pi(g.x1_node(i1) - v2), wrap_2pi(g.x2_node(i2) + v1),
                              v1, v2));
    }
    total += ring * dk;
    if (k > g.k_max) beyond += ring * dk;
  }
  return total > 0.0 ? beyond / total : 0.0;
}

// Tabulates f0(x, k, alpha) = f~0(x1 - sqrt(2k) sin a, x2 + sqrt(2k) cos a,
// sqrt(2k) cos a, sqrt(2k) sin a) on the gyro grid.
inline GyroDistribution init_from_cartesian(const CartDensity& f0, const GyroGrid& grid,
                                            double cutoff_tol = 1e-8,
                                            bool check_cutoff = true) {
  grid.validate();
  if (check_cutoff) {
    const double frac = truncated_mass_fraction(f0, grid);
    if (frac > cutoff_tol)
      throw CutoffError("init_from_cartesian: truncated mass fraction " +
                        std::to_string(frac) + " exceeds tolerance");
  }
  GyroDistribution f = GyroDistribution::zero(grid);
  for (int j = 0; j < grid.n_k; ++j) {
    const double r = std::sqrt(2.0 * grid.k_node(j));
    for (int l = 0; l < grid.n_alpha; ++l) {
      const double a = grid.alpha_node(l);
      const double v1 = r * std::cos(a), v2 = r * std::sin(a);
      for (int i1 = 0; i1 < grid.n_x1; ++i1)
        for (int i2 = 0; i2 < grid.n_x2; ++i2)
          f.values(i1, i2, j, l) = f0(wrap_2pi(grid.x1_node(i1) - v2),
                                      wrap_2pi(grid.x2_node(i2) + v1), v1, v2);
    }
  }
  return f;
}

// Exact transport of the stiff term: out(., alpha) = in(., alpha + dt/eps).
inline void step_alpha_shift(GyroDistribution& f, AlphaShifter& shifter, double dt,
                             double eps) {
  if (dt < 0.0) throw DomainError("step_alpha_shift: dt must be >= 0");
  if (dt == 0.0) return;
  shifter.shift(f.values, dt / eps);
}

// Advection field A = (E2, -E1, sqrt(2k)(E1 cos a + E2 sin a),
// (E2 cos a - E1 sin a)/sqrt(2k)) with E evaluated on the Larmor circle.
inline void eval_advection_eps(const Field2D& field, const GyroGrid& g, double x1,
                               double x2, double k, double alpha, double a_out[4]) {
  if (k < 0.0) k = 0.0;
  if (k > g.k_max) k = g.k_max;
  const double r = std::sqrt(2.0 * k);
  const double c = std::cos(alpha), s = std::sin(alpha);
  const double xt1 = wrap_2pi(x1 - r * s);
  const double xt2 = wrap_2pi(x2 + r * c);
  const double e1 = interp_periodic2(field.e1, xt1, xt2);
  const double e2 = interp_periodic2(field.e2, xt1, xt2);
  a_out[0] = e2;
  a_out[1] = -e1;
  a_out[2] = r * (e1 * c + e2 * s);
  a_out[3] = r > 1e-12 ? (e2 * c - e1 * s) / r : 0.0;
}

struct AdvectionStats {
  KBoundaryFlux flux;
  double max_foot_update = 0.0;  // last fixed-point correction, grid units
  double max_displacement = 0.0;
  bool cfl_exceeded = false;
};

// One unsplit backward semi-Lagrangian step for the field-advection part:
// midpoint fixed-point for the foot location, cubic interpolation at the
// feet. The exact-shift alpha transport is handled elsewhere.
inline AdvectionStats step_field_advection(GyroDistribution& f, const Field2D& field,
                                           double dt, int foot_iters = 2) {
  const GyroGrid& g = f.grid;
  if (!g.k_offset)
    throw SolverError("step_field_advection: requires a cell-centered k grid");
  Array4 out(g.n_x1, g.n_x2, g.n_k, g.n_alpha);
  AdvectionStats stats;
  const double min_cell = std::min(std::min(g.dx1(), g.dx2()), std::min(g.dk(), g.dalpha()));

  double max_update = 0.0, max_disp = 0.0;
  double mass_before = 0.0, mass_after = 0.0;
  long n_clamp = 0, n_outflow = 0;
#pragma omp parallel for collapse(2) schedule(static) \
    reduction(max : max_update, max_disp) \
    reduction(+ : n_clamp, n_outflow, mass_before, mass_after)
  for (int i1 = 0; i1 < g.n_x1; ++i1) {
    for (int i2 = 0; i2 < g.n_x2; ++i2) {
      KBoundaryFlux flux;
      for (int j = 0; j < g.n_k; ++j) {
        for (int l = 0; l < g.n_alpha; ++l) {
          const double z1 = g.x1_node(i1), z2 = g.x2_node(i2);
          const double zk = g.k_node(j), za = g.alpha_node(l);
          double d[4] = {0, 0, 0, 0};
          double upd = 0.0;
          for (int it = 0; it < foot_iters; ++it) {
            double a[4];
            eval_advection_eps(field, g, wrap_2pi(z1 - 0.5 * d[0]), wrap_2pi(z2 - 0.5 * d[1]),
                               zk - 0.5 * d[2], wrap_2pi(za - 0.5 * d[3]), a);
            upd = 0.0;
            for (int c = 0; c < 4; ++c) {
              const double nd = dt * a[c];
              upd = std::max(upd, std::abs(nd - d[c]));
              d[c] = nd;
            }
          }
          max_update = std::max(max_update, upd);
          const double disp =
              std::max(std::max(std::abs(d[0]), std::abs(d[1])),
                       std::max(std::abs(d[2]), std::abs(d[3])));
          max_disp = std::max(max_disp, disp);
          out(i1, i2, j, l) = interp_gyro4(f.values, g, wrap_2pi(z1 - d[0]),
                                           wrap_2pi(z2 - d[1]), zk - d[2],
                                           wrap_2pi(za - d[3]), &flux);
          mass_before += f.values(i1, i2, j, l);
          mass_after += out(i1, i2, j, l);
        }
      }
      n_clamp += flux.clamped_low;
      n_outflow += flux.outflow_high;
    }
  }
  stats.max_foot_update = max_update;
  stats.max_displacement = max_disp;
  stats.flux.clamped_low = n_clamp;
  stats.flux.outflow_high = n_outflow;
  stats.cfl_exceeded = max_disp > min_cell;
  if (max_update > 0.25 * min_cell)
    throw SolverError("step_field_advection: foot iteration not converged; reduce dt");
  // Multiplicative mass fixer: the advection field is divergence-free, so the
  // interpolation-level mass defect is removed by a uniform rescale.
  if (mass_after != 0.0) {
    const double fix = mass_before / mass_after;
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] *= fix;
  }
  f.values = std::move(out);
  return stats;
}

// Full eps-model state: distribution, self-consistent field, clock.
struct EpsSolverState {
  GyroDistribution f;
  Field2D field;
  Array2 n_e;
  double t = 0.0;
  double eps = 0.1;
  double dt = 0.05;
};

inline double default_eps_dt(double eps) { return std::min(0.05, two_pi * eps / 8.0); }

// Strang composition: half alpha-shift, field solve, full field advection,
// half alpha-shift; refreshes the self-consistent field afterwards.
inline AdvectionStats step_strang(EpsSolverState& st, Fft2D& fft, AlphaShifter& shifter,
                                  DepositMethod method = DepositMethod::spectral) {
  step_alpha_shift(st.f, shifter, 0.5 * st.dt, st.eps);
  st.field = self_consistent_field(st.f, st.n_e, fft, method);
  AdvectionStats stats = step_field_advection(st.f, st.field, st.dt);
  step_alpha_shift(st.f, shifter, 0.5 * st.dt, st.eps);
  st.t += st.dt;
  st.field = self_consistent_field(st.f, st.n_e, fft, method);
  return stats;
}

}  // namespace flr
