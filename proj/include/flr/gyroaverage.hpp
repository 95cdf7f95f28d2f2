#pragma once

// Larmor-circle gyroaveraging of fields and the two-scale bracket operator.
// The normative implementation is uniform-angle quadrature; circle samples
// are taken by exact Fourier shifts of the gridded field.

#include <cmath>
#include <complex>
#include <vector>

#include "flr/core.hpp"
#include "flr/fields.hpp"
#include "flr/interp.hpp"
#include "flr/spectral.hpp"

namespace flr {

// Gyroaveraged field <E>(x1, x2, k).
struct GyroField {
  Array3 e1, e2;
};

// <E>(x,k) = (1/2pi) int_0^2pi E(x1 - sqrt(2k) sin a, x2 + sqrt(2k) cos a) da,
// approximated by the n_quad-point rectangle rule (spectrally accurate on
// the periodic circle). k = 0 reduces to the pointwise field.
inline GyroField gyro_average_field(const Field2D& field, const GyroGrid& grid,
                                    Fft2D& fft, int n_quad = 32) {
  if (n_quad < 4) throw DomainError("gyro_average_field: n_quad must be >= 4");
  const int n0 = field.e1.n0(), n1 = field.e1.n1();
  const int n1c = n1 / 2 + 1;
  GyroField out{Array3(n0, n1, grid.n_k), Array3(n0, n1, grid.n_k)};
  auto s1 = fft.forward(field.e1);
  auto s2 = fft.forward(field.e2);
  std::vector<std::complex<double>> a1(s1.size()), a2(s2.size());
  for (int j = 0; j < grid.n_k; ++j) {
    const double r = std::sqrt(2.0 * grid.k_node(j));
    // Quadrature in Fourier space: the angle average becomes a single
    // multiplier per mode, identical to averaging the shifted grids.
    std::fill(a1.begin(), a1.end(), std::complex<double>(0.0));
    std::fill(a2.begin(), a2.end(), std::complex<double>(0.0));
    for (int q = 0; q < n_quad; ++q) {
      const double a = q * two_pi / n_quad;
      const double d1 = -r * std::sin(a), d2 = r * std::cos(a);
      for (int i = 0; i < n0; ++i) {
        const int m0 = fft_mode(i, n0);
        const std::complex<double> p0 = std::polar(1.0 / n_quad, m0 * d1);
        for (int m1 = 0; m1 < n1c; ++m1) {
          const std::size_t idx = static_cast<std::size_t>(i) * n1c + m1;
          const std::complex<double> p = p0 * std::polar(1.0, m1 * d2);
          a1[idx] += p * s1[idx];
          a2[idx] += p * s2[idx];
        }
      }
    }
    Array2 g1 = fft.backward(a1);
    Array2 g2 = fft.backward(a2);
    for (int i = 0; i < n0; ++i)
      for (int m = 0; m < n1; ++m) {
        out.e1(i, m, j) = g1(i, m);
        out.e2(i, m, j) = g2(i, m);
      }
  }
  return out;
}

// Bracket of a tabulated function u(alpha', tau):
//   <u>(alpha) = int_0^2pi u(alpha - tau, tau) dtau,
// rectangle rule over the tau nodes. When the tau count equals the alpha
// count the angle shift lands on grid nodes; otherwise the shift is done by
// periodic cubic interpolation in alpha.
inline std::vector<double> bracket_table(const Array2& u) {
  const int na = u.n0(), nt = u.n1();
  const double dtau = two_pi / nt;
  std::vector<double> out(na, 0.0);
  if (nt == na) {
    for (int l = 0; l < na; ++l)
      for (int m = 0; m < nt; ++m) out[l] += dtau * u(wrap_index(l - m, na), m);
    return out;
  }
  const double dalpha = two_pi / na;
  for (int l = 0; l < na; ++l) {
    for (int m = 0; m < nt; ++m) {
      const double ap = wrap_2pi(l * dalpha - m * dtau);
      const double s = ap / dalpha;
      const int i0 = static_cast<int>(std::floor(s)) - 1;
      double w[4];
      cubic_weights(s - i0, w);
      double v = 0.0;
      for (int a = 0; a < 4; ++a) v += w[a] * u(wrap_index(i0 + a, na), m);
      out[l] += dtau * v;
    }
  }
  return out;
}

// Bracketed advection data of the two-scale limit model, tabulated over
// (x1, x2, k, alpha). Raw values: no 1/2pi normalization (divide by 2pi
// when cross-comparing against the weak-* model's <E>).
struct BracketForces {
  Array4 e1, e2, f_k, f_alpha;
};

// Forms F_k = sqrt(2k)(E1 cos a + E2 sin a), F_alpha = (E2 cos a - E1 sin a)/sqrt(2k)
// from the tau-family of fields evaluated on Larmor circles, then applies
// the bracket quadrature. The tau node count must equal n_alpha so the
// alpha - tau shift is exact.
inline BracketForces bracket_forces(const std::vector<Field2D>& e_tau,
                                    const GyroGrid& grid, Fft2D& fft) {
  const int ntau = static_cast<int>(e_tau.size());
  if (ntau != grid.n_alpha)
    throw SolverError("bracket_forces: tau node count must equal n_alpha");
  if (!grid.k_offset && grid.k_node(0) == 0.0)
    throw DomainError("bracket_forces: k = 0 node present, F_alpha singular");

  const int n0 = grid.n_x1, n1 = grid.n_x2;
  const int n1c = n1 / 2 + 1;
  const double dtau = two_pi / ntau;

  std::vector<std::vector<std::complex<double>>> se1(ntau), se2(ntau);
  for (int m = 0; m < ntau; ++m) {
    se1[m] = fft.forward(e_tau[m].e1);
    se2[m] = fft.forward(e_tau[m].e2);
  }

  BracketForces out{Array4(n0, n1, grid.n_k, grid.n_alpha),
                    Array4(n0, n1, grid.n_k, grid.n_alpha),
                    Array4(n0, n1, grid.n_k, grid.n_alpha),
                    Array4(n0, n1, grid.n_k, grid.n_alpha)};

  std::vector<std::complex<double>> phase(static_cast<std::size_t>(n0) * n1c);
  std::vector<std::complex<double>> b1(phase.size()), b2(phase.size());
  for (int j = 0; j < grid.n_k; ++j) {
    const double r = std::sqrt(2.0 * grid.k_node(j));
    for (int lp = 0; lp < grid.n_alpha; ++lp) {
      const double ap = grid.alpha_node(lp);
      const double c = std::cos(ap), s = std::sin(ap);
      const double d1 = -r * std::sin(ap), d2 = r * std::cos(ap);
      for (int i = 0; i < n0; ++i) {
        const int m0 = fft_mode(i, n0);
        const std::complex<double> p0 = std::polar(1.0, m0 * d1);
        for (int m1 = 0; m1 < n1c; ++m1)
          phase[static_cast<std::size_t>(i) * n1c + m1] =
              p0 * std::polar(1.0, m1 * d2);
      }
      for (int m = 0; m < ntau; ++m) {
        for (std::size_t idx = 0; idx < phase.size(); ++idx) {
          b1[idx] = phase[idx] * se1[m][idx];
          b2[idx] = phase[idx] * se2[m][idx];
        }
        Array2 s1g = fft.backward(b1);
        Array2 s2g = fft.backward(b2);
        const int l = wrap_index(lp + m, grid.n_alpha);
        for (int i = 0; i < n0; ++i)
          for (int i2 = 0; i2 < n1; ++i2) {
            const double v1 = s1g(i, i2), v2 = s2g(i, i2);
            out.e1(i, i2, j, l) += dtau * v1;
            out.e2(i, i2, j, l) += dtau * v2;
            out.f_k(i, i2, j, l) += dtau * r * (v1 * c + v2 * s);
            out.f_alpha(i, i2, j, l) += dtau * (v2 * c - v1 * s) / r;
          }
      }
    }
  }
  return out;
}

}  // namespace flr
