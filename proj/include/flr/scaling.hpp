#pragma once

// Dimensional bookkeeping: derives the reference scales and the small
// parameter eps from a set of physical plasma parameters, and checks the two
// consistency relations that the scaled equations assume.

#include <cmath>

#include "flr/core.hpp"

namespace flr {

struct PhysicalParams {
  double e = 1.602176634e-19;        // elementary charge [C]
  double m_i = 1.67262192369e-27;    // ion mass [kg]
  double epsilon_0 = 8.8541878128e-12;  // vacuum permittivity [F/m]
  double B = 1.0;                    // magnetic field strength [T]
  double v = 1.0e5;                  // thermal velocity scale [m/s]
  double lambda_D = 1.0e-4;          // Debye length [m]
  double L_parallel = 1.0;           // parallel gradient length [m]
  double n = 1.0e18;                 // density scale [1/m^3]

  void validate() const {
    auto pos = [](double x, const char* name) {
      if (!(x > 0.0)) throw DomainError(std::string("PhysicalParams: ") + name + " must be > 0");
    };
    pos(e, "e");
    pos(m_i, "m_i");
    pos(epsilon_0, "epsilon_0");
    pos(B, "B");
    pos(v, "v");
    pos(lambda_D, "lambda_D");
    pos(L_parallel, "L_parallel");
    pos(n, "n");
  }
};

struct DerivedScales {
  double omega_i = 0.0;   // ion cyclotron frequency e B / m_i
  double r_L = 0.0;       // Larmor radius v / omega_i
  double eps = 0.0;       // r_L / L_parallel
  double t_ref = 0.0;     // time scale 1 / (eps omega_i)
  double E_ref = 0.0;     // electric field scale lambda_D e n / epsilon_0
  double phi_ref = 0.0;   // potential scale lambda_D^2 e n / epsilon_0
  double f_ref = 0.0;     // distribution scale n / v^3

  // Residuals of the two ordering assumptions; both should be small for the
  // scaled model to apply.
  double larmor_debye_residual = 0.0;  // | r_L / lambda_D - 1 |
  double field_residual = 0.0;         // | E_ref e / (v m_i omega_i) - eps |
};

inline DerivedScales derive_scales(const PhysicalParams& p) {
  p.validate();
  DerivedScales s;
  s.omega_i = p.e * p.B / p.m_i;
  s.r_L = p.v / s.omega_i;
  s.eps = s.r_L / p.L_parallel;
  s.t_ref = 1.0 / (s.eps * s.omega_i);
  s.E_ref = p.lambda_D * p.e * p.n / p.epsilon_0;
  s.phi_ref = p.lambda_D * p.lambda_D * p.e * p.n / p.epsilon_0;
  s.f_ref = p.n / (p.v * p.v * p.v);
  s.larmor_debye_residual = std::abs(s.r_L / p.lambda_D - 1.0);
  s.field_residual = std::abs(s.E_ref * p.e / (p.v * p.m_i * s.omega_i) - s.eps);
  return s;
}

}  // namespace flr
