#include <catch_amalgamated.hpp>

#include <cmath>

#include <flr/analysis.hpp>
#include <flr/limit.hpp>

using namespace flr;

TEST_CASE("alpha reduction of the initial datum matches refined quadrature", "[limit]") {
  GyroGrid g;
  g.n_x1 = 12;
  g.n_x2 = 12;
  g.n_k = 10;
  g.n_alpha = 32;
  g.k_max = 20.0;

  const CartDensity f0 = [](double x1, double, double v1, double v2) {
    return (1.0 + 0.2 * std::cos(x1)) * std::exp(-0.5 * (v1 * v1 + v2 * v2)) / two_pi;
  };
  const Array3 ginit = init_limit_g(f0, g);

  // Oracle: 2048-point rectangle rule in alpha on the analytic integrand.
  for (int i1 = 0; i1 < g.n_x1; i1 += 3)
    for (int i2 = 0; i2 < g.n_x2; i2 += 3)
      for (int j = 0; j < g.n_k; j += 2) {
        const double r = std::sqrt(2.0 * g.k_node(j));
        double o = 0.0;
        const int nq = 2048;
        for (int q = 0; q < nq; ++q) {
          const double a = q * two_pi / nq;
          const double x1t = g.x1_node(i1) - r * std::sin(a);
          const double v1 = r * std::cos(a), v2 = r * std::sin(a);
          o += two_pi / nq * (1.0 + 0.2 * std::cos(x1t)) *
               std::exp(-0.5 * (v1 * v1 + v2 * v2)) / two_pi;
        }
        REQUIRE(std::abs(ginit(i1, i2, j) - o) < 1e-12);
      }
}

TEST_CASE("weak-* solver: static configuration is stationary", "[limit]") {
  GyroGrid g;
  g.n_x1 = 16;
  g.n_x2 = 16;
  g.n_k = 10;
  g.n_alpha = 16;
  g.k_max = 20.0;
  Fft2D fft(g.n_x1, g.n_x2);

  LimitStateg st;
  st.grid = g;
  st.g = Array3(g.n_x1, g.n_x2, g.n_k);
  for (int i1 = 0; i1 < g.n_x1; ++i1)
    for (int i2 = 0; i2 < g.n_x2; ++i2)
      for (int j = 0; j < g.n_k; ++j) st.g(i1, i2, j) = std::exp(-g.k_node(j));

  // Matching uniform electron background.
  double mean = 0.0;
  for (int j = 0; j < g.n_k; ++j) mean += std::exp(-g.k_node(j)) * g.dk();
  st.n_e = Array2(g.n_x1, g.n_x2, mean);
  st.dt = 0.05;
  st.n_quad = 16;
  refresh_limit_fields(st, fft);

  const Array3 g0 = st.g;
  for (int s = 0; s < 6; ++s) step_limit_g(st, fft);
  for (std::size_t i = 0; i < g0.size(); ++i)
    REQUIRE(std::abs(st.g.data()[i] - g0.data()[i]) < 1e-12);
}

TEST_CASE("weak-* solver conserves per-k-slice mass to roundoff", "[limit]") {
  GyroGrid g;
  g.n_x1 = 16;
  g.n_x2 = 16;
  g.n_k = 8;
  g.n_alpha = 16;
  g.k_max = 12.0;
  Fft2D fft(g.n_x1, g.n_x2);

  LimitStateg st;
  st.grid = g;
  st.g = Array3(g.n_x1, g.n_x2, g.n_k);
  for (int i1 = 0; i1 < g.n_x1; ++i1)
    for (int i2 = 0; i2 < g.n_x2; ++i2)
      for (int j = 0; j < g.n_k; ++j)
        st.g(i1, i2, j) =
            std::exp(-g.k_node(j)) * (1.0 + 0.15 * std::cos(g.x1_node(i1)));
  const Array2 rho0 = limit_g_density(st.g, g, fft);
  double mean = 0.0;
  for (std::size_t i = 0; i < rho0.size(); ++i) mean += rho0.data()[i];
  st.n_e = Array2(g.n_x1, g.n_x2, mean / static_cast<double>(rho0.size()));
  st.dt = 0.05;
  st.n_quad = 16;
  refresh_limit_fields(st, fft);

  const auto m0 = kslice_masses(st.g, g);
  for (int s = 0; s < 10; ++s) step_limit_g(st, fft);
  const auto m1 = kslice_masses(st.g, g);
  for (int j = 0; j < g.n_k; ++j)
    REQUIRE(std::abs(m1[j] - m0[j]) < 1e-13 * std::max(std::abs(m0[j]), 1.0));
}

TEST_CASE("two-scale densities reduce to the weak-* density", "[limit]") {
  GyroGrid g;
  g.n_x1 = 16;
  g.n_x2 = 16;
  g.n_k = 8;
  g.n_alpha = 16;
  g.k_max = 10.0;
  Fft2D fft(g.n_x1, g.n_x2);

  Array3 gw(g.n_x1, g.n_x2, g.n_k);
  GyroDistribution G = GyroDistribution::zero(g);
  for (int i1 = 0; i1 < g.n_x1; ++i1)
    for (int i2 = 0; i2 < g.n_x2; ++i2)
      for (int j = 0; j < g.n_k; ++j) {
        const double b =
            std::exp(-g.k_node(j)) * (1.0 + 0.1 * std::cos(g.x1_node(i1)));
        gw(i1, i2, j) = b;
        for (int l = 0; l < g.n_alpha; ++l)
          G.values(i1, i2, j, l) = b / (two_pi * two_pi);  // G = g / (2 pi)^2
      }

  const Array2 rho_g = limit_g_density(gw, g, fft);
  const auto rho_tau = two_scale_densities(G, fft);
  REQUIRE(static_cast<int>(rho_tau.size()) == g.n_alpha);
  // alpha-independent G: every tau density equals rho_g / 2 pi.
  for (const Array2& r : rho_tau)
    for (std::size_t i = 0; i < r.size(); ++i)
      REQUIRE(std::abs(two_pi * r.data()[i] - rho_g.data()[i]) < 1e-12);
}

TEST_CASE("alpha-averaged two-scale run matches the weak-* run", "[limit]") {
  GyroGrid g;
  g.n_x1 = 16;
  g.n_x2 = 16;
  g.n_k = 8;
  g.n_alpha = 16;
  g.k_max = 10.0;
  Fft2D fft(g.n_x1, g.n_x2);

  LimitStateg lim;
  lim.grid = g;
  lim.g = Array3(g.n_x1, g.n_x2, g.n_k);
  TwoScaleState ts;
  ts.G = GyroDistribution::zero(g);
  for (int i1 = 0; i1 < g.n_x1; ++i1)
    for (int i2 = 0; i2 < g.n_x2; ++i2)
      for (int j = 0; j < g.n_k; ++j) {
        const double b =
            std::exp(-g.k_node(j)) * (1.0 + 0.1 * std::cos(g.x1_node(i1)));
        lim.g(i1, i2, j) = b;
        for (int l = 0; l < g.n_alpha; ++l)
          ts.G.values(i1, i2, j, l) = b / (two_pi * two_pi);
      }

  const Array2 rho0 = limit_g_density(lim.g, g, fft);
  double mean = 0.0;
  for (std::size_t i = 0; i < rho0.size(); ++i) mean += rho0.data()[i];
  const double ne_val = mean / static_cast<double>(rho0.size());
  lim.n_e = Array2(g.n_x1, g.n_x2, ne_val);
  ts.n_e = Array2(g.n_x1, g.n_x2, ne_val);

  const double dt = 0.05;
  const int nsteps = 4;
  lim.dt = dt;
  // Same angular quadrature as the bracket (tau nodes = alpha nodes), so the
  // advection velocities agree to roundoff.
  lim.n_quad = g.n_alpha;
  refresh_limit_fields(lim, fft);
  ts.dt = dt;
  ts.e_tau = solve_two_scale_fields(ts.G, ts.n_e, fft);

  for (int s = 0; s < nsteps; ++s) {
    step_limit_g(lim, fft);
    step_two_scale_G(ts, fft);
  }

  // G stays alpha independent (the bracket fields are alpha independent for
  // tau-independent data).
  for (int i1 = 0; i1 < g.n_x1; ++i1)
    for (int i2 = 0; i2 < g.n_x2; ++i2)
      for (int j = 0; j < g.n_k; ++j)
        for (int l = 1; l < g.n_alpha; ++l)
          REQUIRE(std::abs(ts.G.values(i1, i2, j, l) - ts.G.values(i1, i2, j, 0)) <
                  1e-10);

  // Densities agree: rho_g vs 2 pi rho_G.
  const Array2 rg = limit_g_density(lim.g, g, fft);
  const Array2 rG = two_scale_densities(ts.G, fft)[0];
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < rg.size(); ++i) {
    const double d = rg.data()[i] - two_pi * rG.data()[i];
    num += d * d;
    den += rg.data()[i] * rg.data()[i];
  }
  REQUIRE(std::sqrt(num / den) < 1e-7);

  // <F_k> of the tau-independent field family is spectrally zero.
  const BracketForces bf = bracket_forces(ts.e_tau, g, fft);
  for (std::size_t i = 0; i < bf.f_k.size(); ++i)
    REQUIRE(std::abs(bf.f_k.data()[i]) < 1e-10);
}

TEST_CASE("two-scale initialization scales the full datum by 1/2pi", "[limit]") {
  GyroGrid g;
  g.n_x1 = 8;
  g.n_x2 = 8;
  g.n_k = 16;
  g.n_alpha = 12;
  g.k_max = 20.0;
  const CartDensity f0 = [](double, double, double v1, double v2) {
    return std::exp(-0.5 * (v1 * v1 + v2 * v2)) / two_pi;
  };
  const GyroDistribution f = init_from_cartesian(f0, g);
  const GyroDistribution G = init_two_scale_G(f0, g);
  for (std::size_t i = 0; i < f.values.size(); ++i)
    REQUIRE(std::abs(G.values.data()[i] - f.values.data()[i] / two_pi) < 1e-15);
}
