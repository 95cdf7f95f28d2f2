// Command-line driver: full-model and limit-model runs, the epsilon sweep,
// model comparison, scale derivation, and config diagnostics.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <flr/flr.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitCompat = 4;

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  int threads = 0;
  int snapshot_every = -1;  // -1 = use config value
};

void apply_threads(int threads) {
  if (threads == 0) {
    if (const char* env = std::getenv("FLR_THREADS")) threads = std::atoi(env);
  }
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

flr::RunConfig load(const CommonOpts& opts) {
  flr::RunConfig cfg = flr::parse_config_file(opts.config_path);
  if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
  if (opts.snapshot_every >= 0) cfg.snapshot_every = opts.snapshot_every;
  return cfg;
}

std::string snap_name(const char* stem, int step) {
  std::ostringstream ss;
  ss << stem << "_" << std::setw(6) << std::setfill('0') << step;
  return ss.str();
}

// Compatibility: with auto-normalize the distribution is rescaled so the mean
// deposited charge matches the mean electron density; otherwise a mismatch is
// an error. Returns the rescale factor.
double reconcile_charge(flr::GyroDistribution& f, const flr::Array2& n_e, bool auto_normalize) {
  if (auto_normalize) return flr::normalize_to_electrons(f, n_e);
  double ne_mean = 0.0;
  for (std::size_t i = 0; i < n_e.size(); ++i) ne_mean += n_e.data()[i];
  ne_mean /= static_cast<double>(n_e.size());
  const double rho_mean = f.mass() / (flr::two_pi * flr::two_pi);
  if (std::abs(rho_mean - ne_mean) > 1e-10 * std::max(std::abs(ne_mean), 1.0))
    throw flr::CompatibilityError(
        "mean ion charge " + std::to_string(rho_mean) + " does not match mean electron density " +
        std::to_string(ne_mean) + " (enable auto_normalize or fix the initial datum)");
  return 1.0;
}

double kslice_drift(const std::vector<double>& now, const std::vector<double>& ref) {
  double d = 0.0;
  for (std::size_t j = 0; j < now.size(); ++j)
    d = std::max(d, std::abs(now[j] - ref[j]) / std::max(std::abs(ref[j]), 1e-300));
  return d;
}

std::vector<double> kslice_masses_4d(const flr::GyroDistribution& f) {
  const flr::GyroGrid& g = f.grid;
  std::vector<double> m(g.n_k, 0.0);
  for (int i1 = 0; i1 < g.n_x1; ++i1)
    for (int i2 = 0; i2 < g.n_x2; ++i2)
      for (int j = 0; j < g.n_k; ++j)
        for (int l = 0; l < g.n_alpha; ++l) m[j] += f.values(i1, i2, j, l);
  for (double& v : m) v *= g.dx1() * g.dx2() * g.dalpha();
  return m;
}

int run_eps_model(const flr::RunConfig& cfg) {
  const flr::GyroGrid& grid = cfg.grid;
  flr::Fft2D fft(grid.n_x1, grid.n_x2);
  flr::AlphaShifter shifter(grid.n_alpha);
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);

  flr::EpsSolverState st;
  st.f = flr::init_from_cartesian(flr::make_initial(cfg), grid, cfg.cutoff_tol);
  st.n_e = flr::make_electrons(cfg);
  st.eps = cfg.eps;
  const double lambda = reconcile_charge(st.f, st.n_e, cfg.auto_normalize);
  st.field = flr::self_consistent_field(st.f, st.n_e, fft);

  const int n = static_cast<int>(std::ceil(cfg.t_end / flr::effective_dt(cfg) - 1e-12));
  st.dt = cfg.t_end / n;

  flr::write_metadata(dir, cfg, lambda);
  flr::DiagWriter diag(dir / "diagnostics.csv");
  const auto slices0 = kslice_masses_4d(st.f);
  auto record = [&](int step) {
    flr::DiagRow row = flr::diagnostics_row(st.f, st.field, st.t);
    row.kslice_mass_drift_max = kslice_drift(kslice_masses_4d(st.f), slices0);
    diag.write(row);
    if (cfg.snapshot_every > 0 && step % cfg.snapshot_every == 0 && step > 0 && step < n)
      flr::write_snapshot(dir, snap_name("f", step), st.f.values, st.t, "eps");
  };

  flr::write_snapshot(dir, "f_initial", st.f.values, 0.0, "eps");
  record(0);
  for (int s = 1; s <= n; ++s) {
    flr::step_strang(st, fft, shifter);
    if (s % cfg.diag_every == 0 || s == n) record(s);
  }
  flr::write_snapshot(dir, "f_final", st.f.values, st.t, "eps");
  flr::write_snapshot(dir, "rho_final", flr::deposit_charge(st.f, fft), st.t, "eps");
  return kExitOk;
}

int run_limit_model(const flr::RunConfig& cfg) {
  const flr::GyroGrid& grid = cfg.grid;
  flr::Fft2D fft(grid.n_x1, grid.n_x2);
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);

  flr::GyroDistribution f0 = flr::init_from_cartesian(flr::make_initial(cfg), grid, cfg.cutoff_tol);
  flr::Array2 n_e = flr::make_electrons(cfg);
  const double lambda = reconcile_charge(f0, n_e, cfg.auto_normalize);

  flr::LimitStateg st;
  st.grid = grid;
  st.n_e = std::move(n_e);
  st.g = flr::reduce_alpha(f0);
  st.n_quad = cfg.n_quad;
  flr::refresh_limit_fields(st, fft);

  const int n = static_cast<int>(std::ceil(cfg.t_end / flr::effective_dt(cfg) - 1e-12));
  st.dt = cfg.t_end / n;

  flr::write_metadata(dir, cfg, lambda);
  flr::DiagWriter diag(dir / "diagnostics.csv");
  const auto slices0 = flr::kslice_masses(st.g, grid);
  const double cellw = grid.dx1() * grid.dx2() * grid.dk();
  auto record = [&](int step) {
    flr::DiagRow row;
    row.t = st.t;
    double mass = 0.0, l2 = 0.0, lp = 0.0, mn = st.g.data()[0];
    for (std::size_t i = 0; i < st.g.size(); ++i) {
      const double v = st.g.data()[i];
      mass += v;
      l2 += v * v;
      lp += std::pow(std::abs(v), 4.0);
      mn = std::min(mn, v);
    }
    row.mass = mass * cellw;
    row.l2_norm = std::sqrt(l2 * cellw);
    row.lp_norm = std::pow(lp * cellw, 0.25);
    row.min_f = mn;
    row.field_energy = st.field.energy(grid.dx1(), grid.dx2());
    row.kslice_mass_drift_max = kslice_drift(flr::kslice_masses(st.g, grid), slices0);
    diag.write(row);
    if (cfg.snapshot_every > 0 && step % cfg.snapshot_every == 0 && step > 0 && step < n)
      flr::write_snapshot(dir, snap_name("g", step), st.g, st.t, "limit-g");
  };

  flr::write_snapshot(dir, "g_initial", st.g, 0.0, "limit-g");
  record(0);
  for (int s = 1; s <= n; ++s) {
    flr::step_limit_g(st, fft);
    if (s % cfg.diag_every == 0 || s == n) record(s);
  }
  flr::write_snapshot(dir, "g_final", st.g, st.t, "limit-g");
  flr::write_snapshot(dir, "rho_final", flr::limit_g_density(st.g, grid, fft), st.t, "limit-g");
  return kExitOk;
}

int run_two_scale_model(const flr::RunConfig& cfg) {
  const flr::GyroGrid& grid = cfg.grid;
  flr::Fft2D fft(grid.n_x1, grid.n_x2);
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);

  flr::TwoScaleState st;
  st.G = flr::init_from_cartesian(flr::make_initial(cfg), grid, cfg.cutoff_tol);
  st.n_e = flr::make_electrons(cfg);
  const double lambda = reconcile_charge(st.G, st.n_e, cfg.auto_normalize);
  for (std::size_t i = 0; i < st.G.values.size(); ++i) st.G.values.data()[i] /= flr::two_pi;
  st.e_tau = flr::solve_two_scale_fields(st.G, st.n_e, fft);

  const int n = static_cast<int>(std::ceil(cfg.t_end / flr::effective_dt(cfg) - 1e-12));
  st.dt = cfg.t_end / n;

  flr::write_metadata(dir, cfg, lambda);
  flr::DiagWriter diag(dir / "diagnostics.csv");
  const auto slices0 = kslice_masses_4d(st.G);
  auto record = [&](int step) {
    flr::DiagRow row = flr::diagnostics_row(st.G, st.e_tau.front(), st.t);
    row.kslice_mass_drift_max = kslice_drift(kslice_masses_4d(st.G), slices0);
    diag.write(row);
    if (cfg.snapshot_every > 0 && step % cfg.snapshot_every == 0 && step > 0 && step < n)
      flr::write_snapshot(dir, snap_name("G", step), st.G.values, st.t, "two-scale");
  };

  flr::write_snapshot(dir, "G_initial", st.G.values, 0.0, "two-scale");
  record(0);
  for (int s = 1; s <= n; ++s) {
    flr::step_two_scale_G(st, fft);
    if (s % cfg.diag_every == 0 || s == n) record(s);
  }
  flr::write_snapshot(dir, "G_final", st.G.values, st.t, "two-scale");
  return kExitOk;
}

int run_sweep(const flr::RunConfig& cfg, const std::vector<double>& eps_list) {
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  flr::SweepConfig sc;
  sc.grid = cfg.grid;
  sc.f0 = flr::make_initial(cfg);
  sc.n_e = flr::make_electrons(cfg);
  if (!eps_list.empty()) sc.eps_list = eps_list;
  sc.T = cfg.t_end;
  sc.n_quad = cfg.n_quad;
  const flr::SweepReport rep = flr::convergence_sweep(sc);
  flr::write_metadata(dir, cfg);
  flr::write_sweep_report(dir, rep);
  std::cout << "sweep: " << rep.rows.size() << " rows -> " << (dir / "sweep.csv").string()
            << "\n";
  for (const flr::SweepRow& r : rep.rows)
    std::cout << "  eps=" << r.eps << "  filtered_l2=" << r.filtered_l2
              << "  density_l2=" << r.density_l2 << "  pairing_dev=" << r.pairing_dev
              << "  particle_drift=" << r.particle_drift << "\n";
  return kExitOk;
}

int run_scales(const flr::RunConfig& cfg, const std::string& out_dir) {
  if (!cfg.physical)
    throw flr::ConfigError("scales: config has no [physical] section");
  const json j = flr::scales_to_json(flr::derive_scales(*cfg.physical));
  std::cout << j.dump(2) << "\n";
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ofstream out(fs::path(out_dir) / "scales.json");
    out << j.dump(2) << "\n";
  }
  return kExitOk;
}

// Validates the config, builds the initial state, and reports its
// diagnostics without time stepping.
int run_diag(const flr::RunConfig& cfg) {
  const flr::GyroGrid& grid = cfg.grid;
  flr::Fft2D fft(grid.n_x1, grid.n_x2);
  const flr::CartDensity f0 = flr::make_initial(cfg);
  flr::GyroDistribution f = flr::init_from_cartesian(f0, grid, cfg.cutoff_tol);
  flr::Array2 n_e = flr::make_electrons(cfg);
  const double lambda = reconcile_charge(f, n_e, cfg.auto_normalize);
  const flr::Field2D field = flr::self_consistent_field(f, n_e, fft);
  const flr::DiagRow row = flr::diagnostics_row(f, field, 0.0);

  json j;
  j["version"] = flr::version_string;
  j["model"] = flr::model_name(cfg.model);
  j["dt"] = flr::effective_dt(cfg);
  j["steps"] = static_cast<int>(std::ceil(cfg.t_end / flr::effective_dt(cfg) - 1e-12));
  j["normalization_factor"] = lambda;
  j["truncated_mass_fraction"] = flr::truncated_mass_fraction(f0, grid);
  j["initial"] = {{"mass", row.mass}, {"l2_norm", row.l2_norm}, {"lp_norm", row.lp_norm},
                  {"field_energy", row.field_energy}, {"min_f", row.min_f}};
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

std::vector<double> parse_eps_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw flr::ConfigError("sweep: bad --eps entry: " + item);
    }
    if (!(out.back() > 0.0)) throw flr::ConfigError("sweep: --eps entries must be > 0");
  }
  if (out.empty()) throw flr::ConfigError("sweep: empty --eps list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flrsim: scaled 2D Vlasov-Poisson solver in gyro coordinates, "
               "its finite-Larmor-radius limit models, and a convergence harness"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string eps_arg;

  auto add_common = [&](CLI::App* cmd, bool need_config = true) {
    auto* c = cmd->add_option("--config", opts.config_path, "path to the run configuration");
    if (need_config) c->required();
    cmd->add_option("--out", opts.out_dir, "output directory (overrides config)");
    cmd->add_option("--threads", opts.threads,
                    "worker thread count (default: FLR_THREADS env var)");
    cmd->add_option("--snapshot-every", opts.snapshot_every,
                    "snapshot cadence in steps (overrides config)");
  };

  auto* cmd_eps = app.add_subcommand("run-eps", "run the full model at finite eps");
  add_common(cmd_eps);
  auto* cmd_limit = app.add_subcommand("run-limit", "run the weak-* limit model");
  add_common(cmd_limit);
  auto* cmd_two = app.add_subcommand("run-two-scale", "run the two-scale limit model");
  add_common(cmd_two);
  auto* cmd_sweep = app.add_subcommand("sweep", "epsilon-convergence sweep");
  add_common(cmd_sweep);
  cmd_sweep->add_option("--eps", eps_arg, "comma-separated eps list (decreasing)");
  auto* cmd_compare = app.add_subcommand(
      "compare", "compare the full model against both limit models at one eps");
  add_common(cmd_compare);
  auto* cmd_scales = app.add_subcommand("scales", "derive nondimensional scales, no simulation");
  add_common(cmd_scales);
  auto* cmd_diag = app.add_subcommand("diag", "validate a config and report initial diagnostics");
  add_common(cmd_diag);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    apply_threads(opts.threads);
    const flr::RunConfig cfg = load(opts);
    if (cmd_eps->parsed()) return run_eps_model(cfg);
    if (cmd_limit->parsed()) return run_limit_model(cfg);
    if (cmd_two->parsed()) return run_two_scale_model(cfg);
    if (cmd_sweep->parsed())
      return run_sweep(cfg, eps_arg.empty() ? std::vector<double>{} : parse_eps_list(eps_arg));
    if (cmd_compare->parsed()) return run_sweep(cfg, {cfg.eps});
    if (cmd_scales->parsed()) return run_scales(cfg, opts.out_dir);
    if (cmd_diag->parsed()) return run_diag(cfg);
    std::cerr << "flrsim: no subcommand\n";
    return kExitConfig;
  } catch (const flr::CompatibilityError& e) {
    std::cerr << "flrsim: compatibility error: " << e.what() << "\n";
    return kExitCompat;
  } catch (const flr::ConfigError& e) {
    std::cerr << "flrsim: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const flr::CutoffError& e) {
    std::cerr << "flrsim: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const flr::DomainError& e) {
    std::cerr << "flrsim: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const flr::SolverError& e) {
    std::cerr << "flrsim: solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "flrsim: error: " << e.what() << "\n";
    return kExitSolver;
  }
}
