#pragma once

// Local cubic Lagrange interpolation on uniform grids: periodic in x and
// alpha, one-sided near the k boundaries. Feet leaving the k domain follow
// the zero-inflow / clamp rules of the semi-Lagrangian solvers.

#include <cmath>

#include "flr/core.hpp"
#include "flr/geometry.hpp"

namespace flr {

// Cubic Lagrange weights for offset u relative to stencil nodes {0,1,2,3}.
// Interior evaluations have u in [1,2); one-sided stencils use u outside
// that range.
inline void cubic_weights(double u, double w[4]) {
  const double u1 = u - 1.0, u2 = u - 2.0, u3 = u - 3.0;
  w[0] = -(u1 * u2 * u3) / 6.0;
  w[1] = (u * u2 * u3) / 2.0;
  w[2] = -(u * u1 * u3) / 2.0;
  w[3] = (u * u1 * u2) / 6.0;
}

// Quartic Lagrange weights for offset u relative to stencil nodes {0,...,4}.
// Used with the stencil centred on the nearest node (u near 2), where the
// leading error term is odd in the distance to that node.
inline void quartic_weights(double u, double w[5]) {
  double d[5];
  for (int i = 0; i < 5; ++i) d[i] = u - i;
  w[0] = (d[1] * d[2] * d[3] * d[4]) / 24.0;
  w[1] = (d[0] * d[2] * d[3] * d[4]) / -6.0;
  w[2] = (d[0] * d[1] * d[3] * d[4]) / 4.0;
  w[3] = (d[0] * d[1] * d[2] * d[4]) / -6.0;
  w[4] = (d[0] * d[1] * d[2] * d[3]) / 24.0;
}

inline int wrap_index(int i, int n) {
  int r = i % n;
  return r < 0 ? r + n : r;
}

// Periodic cubic interpolation of a 2D grid over [0,2*pi)^2.
inline double interp_periodic2(const Array2& a, double x1, double x2) {
  const int n0 = a.n0(), n1 = a.n1();
  const double h0 = two_pi / n0, h1 = two_pi / n1;
  const double s0 = x1 / h0, s1 = x2 / h1;
  const int i0 = static_cast<int>(std::floor(s0)) - 1;
  const int j0 = static_cast<int>(std::floor(s1)) - 1;
  double w0[4], w1[4];
  cubic_weights(s0 - i0, w0);
  cubic_weights(s1 - j0, w1);
  double acc = 0.0;
  for (int a0 = 0; a0 < 4; ++a0) {
    const int i = wrap_index(i0 + a0, n0);
    double row = 0.0;
    for (int a1 = 0; a1 < 4; ++a1) row += w1[a1] * a(i, wrap_index(j0 + a1, n1));
    acc += w0[a0] * row;
  }
  return acc;
}

// Periodic bilinear interpolation (deposition fallback option).
inline double interp_bilinear2(const Array2& a, double x1, double x2) {
  const int n0 = a.n0(), n1 = a.n1();
  const double h0 = two_pi / n0, h1 = two_pi / n1;
  double s0 = x1 / h0, s1 = x2 / h1;
  const int i0 = static_cast<int>(std::floor(s0));
  const int j0 = static_cast<int>(std::floor(s1));
  const double f0 = s0 - i0, f1 = s1 - j0;
  const int i1 = wrap_index(i0 + 1, n0), j1 = wrap_index(j0 + 1, n1);
  const int ia = wrap_index(i0, n0), ja = wrap_index(j0, n1);
  return (1 - f0) * ((1 - f1) * a(ia, ja) + f1 * a(ia, j1)) +
         f0 * ((1 - f1) * a(i1, ja) + f1 * a(i1, j1));
}

// Counters for feet that left the k domain during a sweep.
struct KBoundaryFlux {
  long clamped_low = 0;   // feet below the first k node, clamped
  long outflow_high = 0;  // feet beyond k_max, value taken as 0 (zero inflow)
  void merge(const KBoundaryFlux& o) {
    clamped_low += o.clamped_low;
    outflow_high += o.outflow_high;
  }
};

// Cubic interpolation of f(x1, x2, k, alpha): periodic in x1, x2, alpha;
// one-sided cubic in k with clamp at the low edge and zero inflow past k_max.
inline double interp_gyro4(const Array4& f, const GyroGrid& g, double x1, double x2,
                           double k, double alpha, KBoundaryFlux* flux = nullptr) {
  if (k >= g.k_max) {
    if (flux) ++flux->outflow_high;
    return 0.0;
  }
  // Below the first node the stencil extrapolates one-sided down to k = 0;
  // the physical k characteristics cannot cross zero (dk/dt vanishes with
  // sqrt(k)), so only negative feet are clamped. Snapping sub-node feet to
  // the first node instead would bias the inflow there by a one-signed
  // O(|displacement|) error every step, which never averages out.
  const double k0 = g.k_node(0);
  if (k < k0) {
    if (flux) ++flux->clamped_low;
    if (k < 0.0) k = 0.0;
  }

  const double s0 = x1 / g.dx1(), s1 = x2 / g.dx2(), s3 = alpha / g.dalpha();
  const double sk = k / g.dk() - (g.k_offset ? 0.5 : 0.0);
  const int i0 = static_cast<int>(std::floor(s0)) - 1;
  const int j0 = static_cast<int>(std::floor(s1)) - 1;
  const int l0 = static_cast<int>(std::floor(s3)) - 1;

  // The k direction uses a quartic stencil centred on the node nearest the
  // foot (selected by rounding, not by cell). A cell-based stencil always
  // evaluates in its middle cell, where the Lagrange error lobe has a fixed
  // sign, so the small alternating k displacements of the stiff solvers
  // rectify into a one-signed drift that never averages out over a
  // gyration. Centred on the nearest node the leading error is odd in the
  // displacement and cancels as the gyrophase advances.
  const int kw = g.n_k >= 5 ? 5 : 4;
  int kb = kw == 5 ? static_cast<int>(std::lround(sk)) - 2
                   : static_cast<int>(std::floor(sk)) - 1;
  if (kb < 0) kb = 0;
  if (kb > g.n_k - kw) kb = g.n_k - kw;

  double w0[4], w1[4], wk[5], w3[4];
  cubic_weights(s0 - i0, w0);
  cubic_weights(s1 - j0, w1);
  if (kw == 5)
    quartic_weights(sk - kb, wk);
  else
    cubic_weights(sk - kb, wk);
  cubic_weights(s3 - l0, w3);

  double acc = 0.0;
  for (int a0 = 0; a0 < 4; ++a0) {
    const int i = wrap_index(i0 + a0, g.n_x1);
    double acc1 = 0.0;
    for (int a1 = 0; a1 < 4; ++a1) {
      const int j = wrap_index(j0 + a1, g.n_x2);
      double acck = 0.0;
      for (int ak = 0; ak < kw; ++ak) {
        const int kk = kb + ak;
        double acc3 = 0.0;
        for (int a3 = 0; a3 < 4; ++a3)
          acc3 += w3[a3] * f(i, j, kk, wrap_index(l0 + a3, g.n_alpha));
        acck += wk[ak] * acc3;
      }
      acc1 += w1[a1] * acck;
    }
    acc += w0[a0] * acc1;
  }
  return acc;
}

// Cubic interpolation of a (x1, x2, k) grid, periodic in x, one-sided in k,
// used by the weak-* limit solver (no alpha axis).
inline double interp_gyro3(const Array3& f, const GyroGrid& g, double x1, double x2,
                           double k, KBoundaryFlux* flux = nullptr) {
  if (k >= g.k_max) {
    if (flux) ++flux->outflow_high;
    return 0.0;
  }
  const double k0 = g.k_node(0);
  if (k < k0) {
    if (flux) ++flux->clamped_low;
    if (k < 0.0) k = 0.0;
  }
  const double s0 = x1 / g.dx1(), s1 = x2 / g.dx2();
  const double sk = k / g.dk() - (g.k_offset ? 0.5 : 0.0);
  const int i0 = static_cast<int>(std::floor(s0)) - 1;
  const int j0 = static_cast<int>(std::floor(s1)) - 1;
  int kb = static_cast<int>(std::floor(sk)) - 1;
  if (kb < 0) kb = 0;
  if (kb > g.n_k - 4) kb = g.n_k - 4;
  double w0[4], w1[4], wk[4];
  cubic_weights(s0 - i0, w0);
  cubic_weights(s1 - j0, w1);
  cubic_weights(sk - kb, wk);
  double acc = 0.0;
  for (int a0 = 0; a0 < 4; ++a0) {
    const int i = wrap_index(i0 + a0, g.n_x1);
    double acc1 = 0.0;
    for (int a1 = 0; a1 < 4; ++a1) {
      const int j = wrap_index(j0 + a1, g.n_x2);
      double acck = 0.0;
      for (int ak = 0; ak < 4; ++ak) acck += wk[ak] * f(i, j, kb + ak);
      acc1 += w1[a1] * acck;
    }
    acc += w0[a0] * acc1;
  }
  return acc;
}

}  // namespace flr
