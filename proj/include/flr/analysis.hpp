#pragma once

// Verification instruments: the oscillation filter, weak pairings against a
// deterministic test-function bank, conservation tracking, particle
// adiabatic-drift measurement, and the epsilon-convergence sweep.

#include <chrono>
#include <cmath>
#include <functional>
#include <vector>

#include "flr/core.hpp"
#include "flr/fields.hpp"
#include "flr/limit.hpp"
#include "flr/particles.hpp"
#include "flr/spectral.hpp"
#include "flr/vlasov.hpp"

namespace flr {

// g_eps(x, k, alpha, t) = f_eps(x, k, alpha - t/eps, t): removes the fast
// gyration so the result can be compared against the two-scale profile.
inline GyroDistribution filter_distribution(const GyroDistribution& f, AlphaShifter& shifter,
                                            double eps, double t) {
  GyroDistribution out = f;
  shifter.shift(out.values, -t / eps);
  return out;
}

// Weighted L2 distance between two phase-space arrays on the same grid.
inline double l2_distance(const Array4& a, const Array4& b, const GyroGrid& g) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.data()[i] - b.data()[i];
    s += d * d;
  }
  return std::sqrt(s * g.cell_weight());
}

inline double l2_distance_2d(const Array2& a, const Array2& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.data()[i] - b.data()[i];
    s += d * d;
  }
  const double w = (two_pi / a.n0()) * (two_pi / a.n1());
  return std::sqrt(s * w);
}

// Smooth test functions psi(x1, x2, k, alpha, tau), 2pi-periodic in x1, x2,
// alpha and tau, decaying in k. Fixed deterministic bank.
struct TestFunction {
  int m1 = 0, m2 = 0, p = 0, q = 0;
  double width = 1.0;
  double phase = 0.0;

  double operator()(double x1, double x2, double k, double alpha, double tau) const {
    return std::cos(m1 * x1 + m2 * x2 + p * alpha + q * tau + phase) * std::exp(-k / width);
  }
};

inline std::vector<TestFunction> test_function_bank() {
  return {
      {1, 0, 0, 0, 1.0, 0.0},  {0, 1, 0, 0, 1.0, 0.3},  {1, 1, 0, 0, 2.0, 0.0},
      {1, 0, 1, 0, 1.0, 0.0},  {0, 1, 1, 1, 1.0, 0.5},  {2, 0, 0, 1, 2.0, 0.0},
      {1, 0, 2, 0, 1.0, 0.7},  {0, 2, 1, 0, 2.0, 0.0},  {1, 1, 1, 1, 1.0, 0.2},
      {0, 0, 2, 1, 1.0, 0.0},
  };
}

// <f, psi(., tau)> by the grid quadrature.
inline double weak_pairing(const GyroDistribution& f, const TestFunction& psi, double tau) {
  const GyroGrid& g = f.grid;
  double s = 0.0;
  for (int i1 = 0; i1 < g.n_x1; ++i1)
    for (int i2 = 0; i2 < g.n_x2; ++i2)
      for (int j = 0; j < g.n_k; ++j)
        for (int l = 0; l < g.n_alpha; ++l)
          s += f.values(i1, i2, j, l) *
               psi(g.x1_node(i1), g.x2_node(i2), g.k_node(j), g.alpha_node(l), tau);
  return s * g.cell_weight();
}

// Prediction for <f_eps, psi(., t/eps)> from the two-scale profile:
// f_eps(alpha) ~ 2pi G(alpha + t/eps), evaluated by an exact spectral shift.
inline double pairing_prediction(const GyroDistribution& G, AlphaShifter& shifter,
                                 const TestFunction& psi, double tau) {
  GyroDistribution shifted = G;
  shifter.shift(shifted.values, tau);
  for (std::size_t i = 0; i < shifted.values.size(); ++i)
    shifted.values.data()[i] *= two_pi;
  return weak_pairing(shifted, psi, tau);
}

// ---------------------------------------------------------------------------
// Conservation tracking.
// ---------------------------------------------------------------------------

struct DiagRow {
  double t = 0.0;
  double mass = 0.0;
  double l2_norm = 0.0;
  double lp_norm = 0.0;
  double field_energy = 0.0;
  double min_f = 0.0;
  double kslice_mass_drift_max = 0.0;
};

inline DiagRow diagnostics_row(const GyroDistribution& f, const Field2D& field, double t,
                               double lp_order = 4.0) {
  DiagRow r;
  r.t = t;
  r.mass = f.mass();
  r.l2_norm = f.norm_l2();
  r.lp_norm = f.norm_lp(lp_order);
  r.field_energy = field.energy(f.grid.dx1(), f.grid.dx2());
  r.min_f = f.min_value();
  return r;
}

struct ConservationReport {
  double mass_drift = 0.0;          // max relative deviation from the first row
  double l2_drift = 0.0;
  double lp_drift = 0.0;
  double energy_range = 0.0;        // max - min of field energy
  double min_f = 0.0;               // most negative value seen
  double kslice_mass_drift = 0.0;   // max over rows of the per-slice column
};

inline ConservationReport conservation_report(const std::vector<DiagRow>& rows) {
  ConservationReport rep;
  if (rows.empty()) return rep;
  const DiagRow& r0 = rows.front();
  double emin = rows.front().field_energy, emax = emin;
  rep.min_f = rows.front().min_f;
  for (const DiagRow& r : rows) {
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
    rep.mass_drift = std::max(rep.mass_drift, rel(r.mass, r0.mass));
    rep.l2_drift = std::max(rep.l2_drift, rel(r.l2_norm, r0.l2_norm));
    rep.lp_drift = std::max(rep.lp_drift, rel(r.lp_norm, r0.lp_norm));
    emin = std::min(emin, r.field_energy);
    emax = std::max(emax, r.field_energy);
    rep.min_f = std::min(rep.min_f, r.min_f);
    rep.kslice_mass_drift = std::max(rep.kslice_mass_drift, r.kslice_mass_drift_max);
  }
  rep.energy_range = emax - emin;
  return rep;
}

// Per-slice masses of the weak-* unknown, int g(., k_j) dx (used to monitor
// the structural invariance of k).
inline std::vector<double> kslice_masses(const Array3& g, const GyroGrid& grid) {
  std::vector<double> m(grid.n_k, 0.0);
  for (int i1 = 0; i1 < grid.n_x1; ++i1)
    for (int i2 = 0; i2 < grid.n_x2; ++i2)
      for (int j = 0; j < grid.n_k; ++j) m[j] += g(i1, i2, j);
  for (double& v : m) v *= grid.dx1() * grid.dx2();
  return m;
}

// ---------------------------------------------------------------------------
// Particle adiabatic drift.
// ---------------------------------------------------------------------------

// Pushes a single particle through the (static) field with the split
// rotation/kick integrator and returns max_t |k(t) - k(0)|. The drift is
// O(eps) for a smooth field.
inline double adiabatic_drift(const Field2D& field, double eps, Vec2 x0, Vec2 v0, double T,
                              double dt) {
  ParticleEnsemble p;
  p.eps = eps;
  p.add(x0[0], x0[1], v0[0], v0[1]);
  const FieldEval ev = field_evaluator(field);
  const double k0 = p.k_of(0);
  double drift = 0.0;
  const int n = static_cast<int>(std::ceil(T / dt));
  const double h = T / n;
  for (int s = 0; s < n; ++s) {
    push_particles_cartesian(p, ev, h);
    drift = std::max(drift, std::abs(p.k_of(0) - k0));
  }
  return drift;
}

// ---------------------------------------------------------------------------
// Epsilon-convergence sweep.
// ---------------------------------------------------------------------------

// Rescales f so the mean of its deposited charge matches the mean electron
// density (Poisson compatibility on the torus). Returns the factor applied.
inline double normalize_to_electrons(GyroDistribution& f, const Array2& n_e) {
  double ne_mean = 0.0;
  for (std::size_t i = 0; i < n_e.size(); ++i) ne_mean += n_e.data()[i];
  ne_mean /= static_cast<double>(n_e.size());
  const double m = f.mass();
  if (m <= 0.0) throw CompatibilityError("normalize_to_electrons: nonpositive total mass");
  const double lambda = ne_mean * two_pi * two_pi / m;
  for (std::size_t i = 0; i < f.values.size(); ++i) f.values.data()[i] *= lambda;
  return lambda;
}

struct SweepRow {
  double eps = 0.0;
  double dt = 0.0;
  double filtered_l2 = 0.0;   // || g_eps - 2pi G ||_2 at final time
  double density_l2 = 0.0;    // || rho_eps - rho_limit ||_2 at final time
  double pairing_dev = 0.0;   // max over the bank of |pairing - prediction|
  double particle_drift = 0.0;
  double runtime_s = 0.0;
};

struct SweepReport {
  std::vector<SweepRow> rows;       // ordered as the input list
  double limit_runtime_s = 0.0;
  double two_scale_runtime_s = 0.0;
  bool filtered_monotone = false;   // strictly decreasing for decreasing eps
  bool density_monotone = false;
  bool pairing_monotone = false;
};

struct SweepConfig {
  GyroGrid grid;
  CartDensity f0;
  Array2 n_e;
  std::vector<double> eps_list{0.2, 0.1, 0.05, 0.025};
  double T = 1.0;
  double limit_dt = 0.05;
  int n_quad = 32;
  Vec2 particle_x0{1.0, 2.0};
  Vec2 particle_v0{0.7, 0.3};
};

namespace detail {
inline bool strictly_decreasing(const std::vector<SweepRow>& rows,
                                double SweepRow::* field) {
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (!(rows[i].*field < rows[i - 1].*field)) return false;
  return !rows.empty();
}
}  // namespace detail

// Runs the weak-* and two-scale references once, then one full run per eps,
// and collects the convergence metrics. The eps list is expected in
// decreasing order when monotonicity flags are wanted.
inline SweepReport convergence_sweep(const SweepConfig& cfg) {
  using clock = std::chrono::steady_clock;
  const GyroGrid& grid = cfg.grid;
  Fft2D fft(grid.n_x1, grid.n_x2);
  AlphaShifter shifter(grid.n_alpha);
  SweepReport rep;

  GyroDistribution f_init = init_from_cartesian(cfg.f0, grid);
  normalize_to_electrons(f_init, cfg.n_e);

  // Weak-* reference.
  auto t0 = clock::now();
  LimitStateg limit;
  limit.grid = grid;
  limit.n_e = cfg.n_e;
  limit.g = reduce_alpha(f_init);
  limit.dt = cfg.limit_dt;
  limit.n_quad = cfg.n_quad;
  refresh_limit_fields(limit, fft);
  {
    const int n = static_cast<int>(std::ceil(cfg.T / limit.dt - 1e-12));
    limit.dt = cfg.T / n;
    for (int s = 0; s < n; ++s) step_limit_g(limit, fft);
  }
  const Array2 rho_limit = limit_g_density(limit.g, grid, fft);
  rep.limit_runtime_s = std::chrono::duration<double>(clock::now() - t0).count();

  // Two-scale reference.
  t0 = clock::now();
  TwoScaleState ts;
  ts.G = f_init;
  for (std::size_t i = 0; i < ts.G.values.size(); ++i) ts.G.values.data()[i] /= two_pi;
  ts.n_e = cfg.n_e;
  ts.dt = cfg.limit_dt;
  ts.e_tau = solve_two_scale_fields(ts.G, ts.n_e, fft);
  {
    const int n = static_cast<int>(std::ceil(cfg.T / ts.dt - 1e-12));
    ts.dt = cfg.T / n;
    for (int s = 0; s < n; ++s) step_two_scale_G(ts, fft);
  }
  rep.two_scale_runtime_s = std::chrono::duration<double>(clock::now() - t0).count();

  Array4 two_pi_G = ts.G.values;
  for (std::size_t i = 0; i < two_pi_G.size(); ++i) two_pi_G.data()[i] *= two_pi;

  const auto bank = test_function_bank();

  for (double eps : cfg.eps_list) {
    t0 = clock::now();
    SweepRow row;
    row.eps = eps;

    EpsSolverState st;
    st.f = f_init;
    st.n_e = cfg.n_e;
    st.eps = eps;
    // Refine the step quadratically in eps so the splitting error (which
    // scales with (dt/eps)^2 per gyration) shrinks faster than the O(eps)
    // model error being measured.
    st.dt = std::min(default_eps_dt(eps), 3.14159 * eps * eps);
    const int n = static_cast<int>(std::ceil(cfg.T / st.dt - 1e-12));
    st.dt = cfg.T / n;
    row.dt = st.dt;
    st.field = self_consistent_field(st.f, st.n_e, fft);
    const Field2D field0 = st.field;

    // The gyro-density is averaged over exactly the final gyration: weak-*
    // convergence of the density is a statement about time averages, and
    // the instantaneous alpha-averaged density carries a fast-phase-locked
    // bias that does not shrink with eps.
    const int n_last = std::min(n, static_cast<int>(std::lround(two_pi * eps / st.dt)));
    Array2 rho_avg(grid.n_x1, grid.n_x2);
    for (int s = 0; s < n; ++s) {
      step_strang(st, fft, shifter);
      if (n - 1 - s < n_last) {
        const Array2 rho_s = limit_g_density(reduce_alpha(st.f), grid, fft);
        for (std::size_t i = 0; i < rho_avg.size(); ++i)
          rho_avg.data()[i] += rho_s.data()[i] / n_last;
      }
    }

    const GyroDistribution filtered = filter_distribution(st.f, shifter, eps, st.t);
    row.filtered_l2 = l2_distance(filtered.values, two_pi_G, grid);

    row.density_l2 = l2_distance_2d(rho_avg, rho_limit);

    // Weak-pairing deviation per bank member: quadrature-pair amplitude
    // (the member plus its quarter-period phase partner), so the measure is
    // invariant under the arbitrary wrapped phase at the final time instead
    // of oscillating with it.
    const double tau = wrap_2pi(st.t / eps);
    for (TestFunction psi : bank) {
      const double d1 =
          weak_pairing(st.f, psi, tau) - pairing_prediction(ts.G, shifter, psi, tau);
      psi.phase += 0.25 * two_pi;
      const double d2 =
          weak_pairing(st.f, psi, tau) - pairing_prediction(ts.G, shifter, psi, tau);
      row.pairing_dev = std::max(row.pairing_dev, std::hypot(d1, d2));
    }

    row.particle_drift = adiabatic_drift(field0, eps, cfg.particle_x0, cfg.particle_v0,
                                         cfg.T, std::min(0.01, two_pi * eps / 32.0));
    row.runtime_s = std::chrono::duration<double>(clock::now() - t0).count();
    rep.rows.push_back(row);
  }

  rep.filtered_monotone = detail::strictly_decreasing(rep.rows, &SweepRow::filtered_l2);
  rep.density_monotone = detail::strictly_decreasing(rep.rows, &SweepRow::density_l2);
  rep.pairing_monotone = detail::strictly_decreasing(rep.rows, &SweepRow::pairing_dev);
  return rep;
}

}  // namespace flr
