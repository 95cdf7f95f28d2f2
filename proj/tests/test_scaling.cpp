#include <catch_amalgamated.hpp>

#include <cmath>

#include <flr/scaling.hpp>

using namespace flr;

TEST_CASE("derived scales match the closed-form definitions", "[scaling]") {
  PhysicalParams p;
  p.B = 2.5;
  p.v = 3.0e5;
  p.lambda_D = 7.0e-5;
  p.L_parallel = 0.4;
  p.n = 5.0e18;

  const DerivedScales s = derive_scales(p);
  REQUIRE(s.omega_i == Catch::Approx(p.e * p.B / p.m_i).epsilon(1e-15));
  REQUIRE(s.r_L == Catch::Approx(p.v / s.omega_i).epsilon(1e-15));
  REQUIRE(s.eps == Catch::Approx(s.r_L / p.L_parallel).epsilon(1e-15));
  REQUIRE(s.t_ref == Catch::Approx(1.0 / (s.eps * s.omega_i)).epsilon(1e-15));
  REQUIRE(s.E_ref == Catch::Approx(p.lambda_D * p.e * p.n / p.epsilon_0).epsilon(1e-15));
  REQUIRE(s.phi_ref == Catch::Approx(s.E_ref * p.lambda_D).epsilon(1e-15));
  REQUIRE(s.f_ref == Catch::Approx(p.n / (p.v * p.v * p.v)).epsilon(1e-15));
}

TEST_CASE("consistently ordered parameters give vanishing residuals", "[scaling]") {
  // Choose lambda_D = r_L, then L_parallel so that the dimensionless field
  // strength equals eps. Both consistency residuals must then be ~0.
  PhysicalParams p;
  p.B = 2.0;
  p.v = 2.0e5;
  p.n = 1.0e18;

  const double omega = p.e * p.B / p.m_i;
  const double r_L = p.v / omega;
  p.lambda_D = r_L;

  const double field_strength = p.lambda_D * p.e * p.e * p.n / (p.epsilon_0 * p.v * p.m_i * omega);
  p.L_parallel = r_L / field_strength;

  const DerivedScales s = derive_scales(p);
  REQUIRE(s.larmor_debye_residual < 1e-12);
  REQUIRE(s.field_residual < 1e-12 * s.eps);
  REQUIRE(s.eps == Catch::Approx(field_strength).epsilon(1e-12));
}

TEST_CASE("larger parallel length gives smaller eps and longer time scale", "[scaling]") {
  PhysicalParams p;
  const DerivedScales a = derive_scales(p);
  p.L_parallel *= 10.0;
  const DerivedScales b = derive_scales(p);
  REQUIRE(b.eps == Catch::Approx(a.eps / 10.0).epsilon(1e-14));
  REQUIRE(b.t_ref == Catch::Approx(a.t_ref * 10.0).epsilon(1e-14));
}

TEST_CASE("nonpositive physical parameters are rejected", "[scaling]") {
  PhysicalParams p;
  p.B = 0.0;
  REQUIRE_THROWS_AS(derive_scales(p), DomainError);
  p.B = 1.0;
  p.n = -1.0e18;
  REQUIRE_THROWS_AS(derive_scales(p), DomainError);
  p.n = 1.0e18;
  p.lambda_D = 0.0;
  REQUIRE_THROWS_AS(derive_scales(p), DomainError);
}
