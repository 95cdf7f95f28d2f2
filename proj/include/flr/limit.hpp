#pragma once

// Solvers for the two limit models: the weak-* finite-Larmor-radius model
// for g(x, k, t) and the two-scale model for G(x, k, alpha, t) with
// tau-resolved fields.

#include <cmath>
#include <vector>

#include "flr/core.hpp"
#include "flr/fields.hpp"
#include "flr/gyroaverage.hpp"
#include "flr/interp.hpp"
#include "flr/spectral.hpp"
#include "flr/vlasov.hpp"

namespace flr {

// ---------------------------------------------------------------------------
// Weak-* limit model: per-k transport of g by (<E2>, -<E1>).
// ---------------------------------------------------------------------------

struct LimitStateg {
  Array3 g;  // (x1, x2, k)
  Field2D field;
  GyroField gyro;  // <E>(x, k)
  Array2 n_e;
  GyroGrid grid;
  double t = 0.0;
  double dt = 0.05;
  int n_quad = 32;
};

// g(x, k, 0) = int_0^2pi f0_gyro(x, k, alpha) dalpha.
inline Array3 reduce_alpha(const GyroDistribution& f) {
  const GyroGrid& g = f.grid;
  Array3 out(g.n_x1, g.n_x2, g.n_k);
  for (int i1 = 0; i1 < g.n_x1; ++i1)
    for (int i2 = 0; i2 < g.n_x2; ++i2)
      for (int j = 0; j < g.n_k; ++j) {
        double s = 0.0;
        for (int l = 0; l < g.n_alpha; ++l) s += f.values(i1, i2, j, l);
        out(i1, i2, j) = s * g.dalpha();
      }
  return out;
}

inline Array3 init_limit_g(const CartDensity& f0, const GyroGrid& grid,
                           double cutoff_tol = 1e-8, bool check_cutoff = true) {
  return reduce_alpha(init_from_cartesian(f0, grid, cutoff_tol, check_cutoff));
}

// rho(x~) = (1/2pi) int int g(x~1 + sqrt(2k) sin a, x~2 - sqrt(2k) cos a, k) da dk,
// by exact Fourier shifts of each k slice.
inline Array2 limit_g_density(const Array3& g, const GyroGrid& grid, Fft2D& fft) {
  const double w = grid.dk() * grid.dalpha() / two_pi;
  const int n1c = grid.n_x2 / 2 + 1;
  std::vector<std::complex<double>> acc(static_cast<std::size_t>(grid.n_x1) * n1c, 0.0);
  Array2 slice(grid.n_x1, grid.n_x2);
  for (int j = 0; j < grid.n_k; ++j) {
    const double r = std::sqrt(2.0 * grid.k_node(j));
    for (int i1 = 0; i1 < grid.n_x1; ++i1)
      for (int i2 = 0; i2 < grid.n_x2; ++i2) slice(i1, i2) = g(i1, i2, j);
    auto s = fft.forward(slice);
    for (int l = 0; l < grid.n_alpha; ++l) {
      const double a = grid.alpha_node(l);
      auto shifted = s;
      fft.apply_shift_phase(shifted, r * std::sin(a), -r * std::cos(a));
      for (std::size_t m = 0; m < acc.size(); ++m) acc[m] += w * shifted[m];
    }
  }
  return fft.backward(acc);
}

// One backward semi-Lagrangian step of a single k slice by the (frozen)
// velocity (u1, u2)(x). Midpoint foot iteration, cubic interpolation, and a
// multiplicative per-slice mass fixer (the advection field is
// divergence-free, so the correction is at the interpolation floor).
inline void advect_slice_2d(Array2& gk, const Array2& u1, const Array2& u2, double dt,
                            int foot_iters = 2) {
  const int n0 = gk.n0(), n1 = gk.n1();
  const double h0 = two_pi / n0, h1 = two_pi / n1;
  Array2 out(n0, n1);
  double mass_before = 0.0, mass_after = 0.0;
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n1; ++j) {
      const double z1 = i * h0, z2 = j * h1;
      double d1 = 0.0, d2 = 0.0;
      for (int it = 0; it < foot_iters; ++it) {
        const double m1 = wrap_2pi(z1 - 0.5 * d1), m2 = wrap_2pi(z2 - 0.5 * d2);
        d1 = dt * interp_periodic2(u1, m1, m2);
        d2 = dt * interp_periodic2(u2, m1, m2);
      }
      out(i, j) = interp_periodic2(gk, wrap_2pi(z1 - d1), wrap_2pi(z2 - d2));
      mass_before += gk(i, j);
      mass_after += out(i, j);
    }
  if (mass_after != 0.0) {
    const double fix = mass_before / mass_after;
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] *= fix;
  }
  gk = std::move(out);
}

inline void advect_limit_g(Array3& g, const GyroField& gyro, const GyroGrid& grid,
                           double dt) {
  const int nk = grid.n_k;
#pragma omp parallel for schedule(static)
  for (int j = 0; j < nk; ++j) {
    Array2 gk(grid.n_x1, grid.n_x2), u1(grid.n_x1, grid.n_x2), u2(grid.n_x1, grid.n_x2);
    for (int i1 = 0; i1 < grid.n_x1; ++i1)
      for (int i2 = 0; i2 < grid.n_x2; ++i2) {
        gk(i1, i2) = g(i1, i2, j);
        u1(i1, i2) = gyro.e2(i1, i2, j);    // dx1/dt = <E2>
        u2(i1, i2) = -gyro.e1(i1, i2, j);   // dx2/dt = -<E1>
      }
    advect_slice_2d(gk, u1, u2, dt);
    for (int i1 = 0; i1 < grid.n_x1; ++i1)
      for (int i2 = 0; i2 < grid.n_x2; ++i2) g(i1, i2, j) = gk(i1, i2);
  }
}

inline void refresh_limit_fields(LimitStateg& st, Fft2D& fft) {
  const Array2 rho = limit_g_density(st.g, st.grid, fft);
  st.field = solve_poisson(rho, st.n_e, fft);
  st.gyro = gyro_average_field(st.field, st.grid, fft, st.n_quad);
}

// Second-order step: predict the field at t + dt/2 from a half step, then
// advect the original g a full step in the midpoint field. k is never
// advected, so g slices exchange no mass by construction.
inline void step_limit_g(LimitStateg& st, Fft2D& fft) {
  Array3 g_half = st.g;
  advect_limit_g(g_half, st.gyro, st.grid, 0.5 * st.dt);
  const Array2 rho_half = limit_g_density(g_half, st.grid, fft);
  const Field2D field_half = solve_poisson(rho_half, st.n_e, fft);
  const GyroField gyro_half = gyro_average_field(field_half, st.grid, fft, st.n_quad);
  advect_limit_g(st.g, gyro_half, st.grid, st.dt);
  st.t += st.dt;
  refresh_limit_fields(st, fft);
}

// ---------------------------------------------------------------------------
// Two-scale limit model: G(x, k, alpha) with tau-resolved fields.
// ---------------------------------------------------------------------------

struct TwoScaleState {
  GyroDistribution G;
  std::vector<Field2D> e_tau;  // N_tau = n_alpha members
  Array2 n_e;                  // electron density (the Poisson RHS uses n_e/2pi)
  double t = 0.0;
  double dt = 0.05;
};

// G(x, k, alpha, 0) = f0_gyro / 2pi.
inline GyroDistribution init_two_scale_G(const CartDensity& f0, const GyroGrid& grid,
                                         double cutoff_tol = 1e-8,
                                         bool check_cutoff = true) {
  GyroDistribution G = init_from_cartesian(f0, grid, cutoff_tol, check_cutoff);
  for (std::size_t i = 0; i < G.values.size(); ++i) G.values.data()[i] /= two_pi;
  return G;
}

// rho_tau(x~) = int int G(x~1 + sqrt(2k) sin a, x~2 - sqrt(2k) cos a, k, a + tau) dk da
// for every tau node at once (tau_m = alpha_m, node-aligned shifts).
inline std::vector<Array2> two_scale_densities(const GyroDistribution& G, Fft2D& fft) {
  const GyroGrid& g = G.grid;
  const int ntau = g.n_alpha;
  const double w = g.dk() * g.dalpha();
  const int n1c = g.n_x2 / 2 + 1;
  const std::size_t nspec = static_cast<std::size_t>(g.n_x1) * n1c;
  std::vector<std::vector<std::complex<double>>> acc(
      ntau, std::vector<std::complex<double>>(nspec, 0.0));
  Array2 slice(g.n_x1, g.n_x2);
  for (int j = 0; j < g.n_k; ++j) {
    const double r = std::sqrt(2.0 * g.k_node(j));
    // Spectra of all alpha slices at this k.
    std::vector<std::vector<std::complex<double>>> spec(ntau);
    for (int l = 0; l < g.n_alpha; ++l) {
      for (int i1 = 0; i1 < g.n_x1; ++i1)
        for (int i2 = 0; i2 < g.n_x2; ++i2) slice(i1, i2) = G.values(i1, i2, j, l);
      spec[l] = fft.forward(slice);
    }
    for (int l = 0; l < g.n_alpha; ++l) {
      const double a = g.alpha_node(l);
      std::vector<std::complex<double>> phase(nspec);
      for (int i = 0; i < g.n_x1; ++i) {
        const int m0 = fft_mode(i, g.n_x1);
        const std::complex<double> p0 = std::polar(1.0, m0 * r * std::sin(a));
        for (int m1 = 0; m1 < n1c; ++m1)
          phase[static_cast<std::size_t>(i) * n1c + m1] =
              p0 * std::polar(1.0, -m1 * r * std::cos(a));
      }
      for (int m = 0; m < ntau; ++m) {
        const auto& src = spec[(l + m) % g.n_alpha];
        auto& dst = acc[m];
        for (std::size_t idx = 0; idx < nspec; ++idx)
          dst[idx] += w * phase[idx] * src[idx];
      }
    }
  }
  std::vector<Array2> out;
  out.reserve(ntau);
  for (int m = 0; m < ntau; ++m) out.push_back(fft.backward(acc[m]));
  return out;
}

inline std::vector<Field2D> solve_two_scale_fields(const GyroDistribution& G,
                                                   const Array2& n_e, Fft2D& fft) {
  Array2 n_e_scaled(n_e.n0(), n_e.n1());
  for (std::size_t i = 0; i < n_e.size(); ++i)
    n_e_scaled.data()[i] = n_e.data()[i] / two_pi;
  auto rho = two_scale_densities(G, fft);
  std::vector<Field2D> fields;
  fields.reserve(rho.size());
  for (auto& r : rho) fields.push_back(solve_poisson(r, n_e_scaled, fft));
  return fields;
}

// 4D semi-Lagrangian step by the tabulated bracket field
// (<E2>, -<E1>, <F_k>, <F_alpha>), with multiplicative mass fixer.
inline void advect_two_scale(GyroDistribution& G, const BracketForces& U, double dt,
                             int foot_iters = 2) {
  const GyroGrid& g = G.grid;
  Array4 out(g.n_x1, g.n_x2, g.n_k, g.n_alpha);
  const double k_lo = g.k_node(0);
  const double k_hi = g.k_node(g.n_k - 1);
  double mass_before = 0.0, mass_after = 0.0;
#pragma omp parallel for collapse(2) schedule(static) reduction(+ : mass_before, mass_after)
  for (int i1 = 0; i1 < g.n_x1; ++i1) {
    for (int i2 = 0; i2 < g.n_x2; ++i2) {
      KBoundaryFlux flux;
      for (int j = 0; j < g.n_k; ++j) {
        for (int l = 0; l < g.n_alpha; ++l) {
          const double z1 = g.x1_node(i1), z2 = g.x2_node(i2);
          const double zk = g.k_node(j), za = g.alpha_node(l);
          double d[4] = {0, 0, 0, 0};
          for (int it = 0; it < foot_iters; ++it) {
            const double m1 = wrap_2pi(z1 - 0.5 * d[0]);
            const double m2 = wrap_2pi(z2 - 0.5 * d[1]);
            const double mk = std::clamp(zk - 0.5 * d[2], k_lo, k_hi);
            const double ma = wrap_2pi(za - 0.5 * d[3]);
            d[0] = dt * interp_gyro4(U.e2, g, m1, m2, mk, ma);
            d[1] = dt * -interp_gyro4(U.e1, g, m1, m2, mk, ma);
            d[2] = dt * interp_gyro4(U.f_k, g, m1, m2, mk, ma);
            d[3] = dt * interp_gyro4(U.f_alpha, g, m1, m2, mk, ma);
          }
          out(i1, i2, j, l) =
              interp_gyro4(G.values, g, wrap_2pi(z1 - d[0]), wrap_2pi(z2 - d[1]),
                           zk - d[2], wrap_2pi(za - d[3]), &flux);
          mass_before += G.values(i1, i2, j, l);
          mass_after += out(i1, i2, j, l);
        }
      }
    }
  }
  if (mass_after != 0.0) {
    const double fix = mass_before / mass_after;
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] *= fix;
  }
  G.values = std::move(out);
}

// Second-order two-scale step: per-tau Poisson solves, bracket forces,
// midpoint field prediction, one 4D semi-Lagrangian sweep.
inline void step_two_scale_G(TwoScaleState& st, Fft2D& fft) {
  const GyroGrid& g = st.G.grid;
  if (static_cast<int>(st.e_tau.size()) != g.n_alpha)
    st.e_tau = solve_two_scale_fields(st.G, st.n_e, fft);

  GyroDistribution G_half = st.G;
  advect_two_scale(G_half, bracket_forces(st.e_tau, g, fft), 0.5 * st.dt);
  const auto e_half = solve_two_scale_fields(G_half, st.n_e, fft);
  advect_two_scale(st.G, bracket_forces(e_half, g, fft), st.dt);
  st.t += st.dt;
  st.e_tau = solve_two_scale_fields(st.G, st.n_e, fft);
}

}  // namespace flr
