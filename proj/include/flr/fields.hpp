#pragma once

// Periodic Poisson solve, field evaluation E = -grad(phi), and charge
// deposition from gyro-coordinate distributions.

#include <cmath>
#include <complex>
#include <vector>

#include "flr/core.hpp"
#include "flr/geometry.hpp"
#include "flr/interp.hpp"
#include "flr/spectral.hpp"

namespace flr {

// Potential and electric field on the spatial torus. Gauge: mean(phi) = 0.
struct Field2D {
  Array2 phi, e1, e2;

  static Field2D zero(int n0, int n1) {
    return {Array2(n0, n1), Array2(n0, n1), Array2(n0, n1)};
  }

  double energy(double dx1, double dx2) const {
    double s = 0.0;
    for (std::size_t i = 0; i < e1.size(); ++i)
      s += e1.data()[i] * e1.data()[i] + e2.data()[i] * e2.data()[i];
    return s * dx1 * dx2;
  }
};

// f(x1, x2, k, alpha) sampled on a GyroGrid.
struct GyroDistribution {
  Array4 values;
  GyroGrid grid;

  static GyroDistribution zero(const GyroGrid& g) {
    return {Array4(g.n_x1, g.n_x2, g.n_k, g.n_alpha), g};
  }

  double mass() const {
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += values.data()[i];
    return s * grid.cell_weight();
  }

  double norm_lp(double p) const {
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
      s += std::pow(std::abs(values.data()[i]), p);
    return std::pow(s * grid.cell_weight(), 1.0 / p);
  }

  double norm_l2() const {
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
      s += values.data()[i] * values.data()[i];
    return std::sqrt(s * grid.cell_weight());
  }

  double min_value() const {
    double m = values.size() ? values.data()[0] : 0.0;
    for (std::size_t i = 1; i < values.size(); ++i)
      m = std::min(m, values.data()[i]);
    return m;
  }
};

enum class DepositMethod { spectral, bilinear };

// rho(x~) = sum over (k, alpha) of f(x~1 + sqrt(2k) sin a, x~2 - sqrt(2k) cos a, k, a)
// with midpoint weights in k and rectangle weights in alpha. The spectral
// path samples each (k, alpha) slice by an exact Fourier shift, which
// conserves total charge to roundoff.
inline Array2 deposit_charge(const GyroDistribution& f, Fft2D& fft,
                             DepositMethod method = DepositMethod::spectral) {
  const GyroGrid& g = f.grid;
  const double w = g.dk() * g.dalpha();
  Array2 slice(g.n_x1, g.n_x2);
  if (method == DepositMethod::spectral) {
    const int n1c = g.n_x2 / 2 + 1;
    std::vector<std::complex<double>> acc(static_cast<std::size_t>(g.n_x1) * n1c, 0.0);
    for (int j = 0; j < g.n_k; ++j) {
      const double r = std::sqrt(2.0 * g.k_node(j));
      for (int l = 0; l < g.n_alpha; ++l) {
        const double a = g.alpha_node(l);
        for (int i1 = 0; i1 < g.n_x1; ++i1)
          for (int i2 = 0; i2 < g.n_x2; ++i2) slice(i1, i2) = f.values(i1, i2, j, l);
        auto s = fft.forward(slice);
        fft.apply_shift_phase(s, r * std::sin(a), -r * std::cos(a));
        for (std::size_t m = 0; m < acc.size(); ++m) acc[m] += w * s[m];
      }
    }
    return fft.backward(acc);
  }
  Array2 rho(g.n_x1, g.n_x2);
  for (int j = 0; j < g.n_k; ++j) {
    const double r = std::sqrt(2.0 * g.k_node(j));
    for (int l = 0; l < g.n_alpha; ++l) {
      const double a = g.alpha_node(l);
      const double d1 = r * std::sin(a), d2 = -r * std::cos(a);
      for (int i1 = 0; i1 < g.n_x1; ++i1)
        for (int i2 = 0; i2 < g.n_x2; ++i2) slice(i1, i2) = f.values(i1, i2, j, l);
      for (int i1 = 0; i1 < g.n_x1; ++i1)
        for (int i2 = 0; i2 < g.n_x2; ++i2)
          rho(i1, i2) += w * interp_bilinear2(slice, wrap_2pi(g.x1_node(i1) + d1),
                                              wrap_2pi(g.x2_node(i2) + d2));
    }
  }
  return rho;
}

// Spectral solve of -Laplace(phi) = rho - n_e on the torus with zero-mean
// gauge, followed by E = -grad(phi) by spectral differentiation. The RHS
// must have zero mean (periodic solvability).
inline Field2D solve_poisson(const Array2& rho, const Array2& n_e, Fft2D& fft,
                             double compat_tol = 1e-10) {
  const int n0 = rho.n0(), n1 = rho.n1();
  Array2 rhs(n0, n1);
  double mean = 0.0;
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    rhs.data()[i] = rho.data()[i] - n_e.data()[i];
    mean += rhs.data()[i];
  }
  mean /= static_cast<double>(rhs.size());
  if (std::abs(mean) > compat_tol)
    throw CompatibilityError("solve_poisson: RHS mean " + std::to_string(mean) +
                             " exceeds compatibility tolerance");

  auto s = fft.forward(rhs);
  const int n1c = n1 / 2 + 1;
  std::vector<std::complex<double>> sphi(s.size()), se1(s.size()), se2(s.size());
  for (int i = 0; i < n0; ++i) {
    const int m0 = fft_mode(i, n0);
    for (int j = 0; j < n1c; ++j) {
      const int m1 = j;
      const std::size_t idx = static_cast<std::size_t>(i) * n1c + j;
      const double m2 = static_cast<double>(m0) * m0 + static_cast<double>(m1) * m1;
      if (m2 == 0.0) {
        sphi[idx] = se1[idx] = se2[idx] = 0.0;
        continue;
      }
      sphi[idx] = s[idx] / m2;
      // E = -grad(phi): multiply by -i*m, drop unmatched Nyquist modes.
      const double d0 = (n0 % 2 == 0 && i == n0 / 2) ? 0.0 : m0;
      const double d1 = (n1 % 2 == 0 && j == n1 / 2) ? 0.0 : m1;
      se1[idx] = std::complex<double>(0.0, -d0) * sphi[idx];
      se2[idx] = std::complex<double>(0.0, -d1) * sphi[idx];
    }
  }
  Field2D out;
  out.phi = fft.backward(sphi);
  out.e1 = fft.backward(se1);
  out.e2 = fft.backward(se2);
  return out;
}

inline Field2D self_consistent_field(const GyroDistribution& f, const Array2& n_e,
                                     Fft2D& fft,
                                     DepositMethod method = DepositMethod::spectral,
                                     double compat_tol = 1e-10) {
  return solve_poisson(deposit_charge(f, fft, method), n_e, fft, compat_tol);
}

}  // namespace flr
