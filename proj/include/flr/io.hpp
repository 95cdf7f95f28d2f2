#pragma once

// Output formats: raw little-endian float64 snapshots with JSON sidecars,
// the fixed-schema diagnostics CSV, run metadata, and sweep reports.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <string>
#include <vector>

#include <json.hpp>

#include "flr/analysis.hpp"
#include "flr/config.hpp"
#include "flr/core.hpp"
#include "flr/scaling.hpp"

namespace flr {

inline constexpr const char* version_string = "flrsim 0.1.0";

namespace detail {

inline void write_raw_f64(const std::filesystem::path& path, const double* data,
                          std::size_t count) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SolverError("io: cannot open " + path.string());
  static_assert(sizeof(double) == 8);
  out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * 8));
  if (!out) throw SolverError("io: short write to " + path.string());
}

inline void write_sidecar(const std::filesystem::path& path, const std::vector<int>& shape,
                          const std::vector<std::string>& axes, double time,
                          const std::string& model) {
  nlohmann::json j;
  j["shape"] = shape;
  j["axes"] = axes;
  j["time"] = time;
  j["model"] = model;
  std::ofstream out(path);
  if (!out) throw SolverError("io: cannot open " + path.string());
  out << j.dump(2) << "\n";
}

}  // namespace detail

// Snapshot writers: <name>.f64 (row-major, axis order as documented in the
// sidecar, alpha fastest) plus <name>.json.
inline void write_snapshot(const std::filesystem::path& dir, const std::string& name,
                           const Array4& a, double time, const std::string& model) {
  detail::write_raw_f64(dir / (name + ".f64"), a.data(), a.size());
  detail::write_sidecar(dir / (name + ".json"), {a.n0(), a.n1(), a.n2(), a.n3()},
                        {"x1", "x2", "k", "alpha"}, time, model);
}

inline void write_snapshot(const std::filesystem::path& dir, const std::string& name,
                           const Array3& a, double time, const std::string& model) {
  detail::write_raw_f64(dir / (name + ".f64"), a.data(), a.size());
  detail::write_sidecar(dir / (name + ".json"), {a.n0(), a.n1(), a.n2()}, {"x1", "x2", "k"},
                        time, model);
}

inline void write_snapshot(const std::filesystem::path& dir, const std::string& name,
                           const Array2& a, double time, const std::string& model) {
  detail::write_raw_f64(dir / (name + ".f64"), a.data(), a.size());
  detail::write_sidecar(dir / (name + ".json"), {a.n0(), a.n1()}, {"x1", "x2"}, time, model);
}

// Diagnostics CSV with a fixed schema.
class DiagWriter {
 public:
  explicit DiagWriter(const std::filesystem::path& path) : out_(path) {
    if (!out_) throw SolverError("io: cannot open " + path.string());
    out_ << "time,mass,l2_norm,lp_norm,field_energy,min_f,kslice_mass_drift_max\n";
    out_ << std::setprecision(17);
  }

  void write(const DiagRow& r) {
    out_ << r.t << ',' << r.mass << ',' << r.l2_norm << ',' << r.lp_norm << ','
         << r.field_energy << ',' << r.min_f << ',' << r.kslice_mass_drift_max << '\n';
    out_.flush();
  }

 private:
  std::ofstream out_;
};

inline nlohmann::json config_to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["model"] = model_name(cfg.model);
  j["grid"] = {{"n_x1", cfg.grid.n_x1}, {"n_x2", cfg.grid.n_x2}, {"n_k", cfg.grid.n_k},
               {"n_alpha", cfg.grid.n_alpha}, {"k_max", cfg.grid.k_max},
               {"k_offset", cfg.grid.k_offset}};
  j["run"] = {{"eps", cfg.eps}, {"dt", effective_dt(cfg)}, {"t_end", cfg.t_end},
              {"n_quad", cfg.n_quad}, {"snapshot_every", cfg.snapshot_every},
              {"diag_every", cfg.diag_every}, {"auto_normalize", cfg.auto_normalize},
              {"cutoff_tol", cfg.cutoff_tol}};
  j["initial"] = {{"amplitude", cfg.amplitude}, {"width", cfg.width}, {"delta", cfg.delta},
                  {"mode_m1", cfg.mode_m1}, {"mode_m2", cfg.mode_m2}};
  j["electrons"] = {{"value", cfg.ne_value}, {"delta", cfg.ne_delta},
                    {"mode_m1", cfg.ne_m1}, {"mode_m2", cfg.ne_m2}};
  return j;
}

inline nlohmann::json scales_to_json(const DerivedScales& s) {
  return {{"omega_i", s.omega_i}, {"r_L", s.r_L}, {"eps", s.eps}, {"t_ref", s.t_ref},
          {"E_ref", s.E_ref}, {"phi_ref", s.phi_ref}, {"f_ref", s.f_ref},
          {"larmor_debye_residual", s.larmor_debye_residual},
          {"field_residual", s.field_residual}};
}

inline void write_metadata(const std::filesystem::path& dir, const RunConfig& cfg,
                           double normalization = 1.0) {
  nlohmann::json j;
  j["version"] = version_string;
  j["config"] = config_to_json(cfg);
  j["normalization_factor"] = normalization;
  if (cfg.physical) j["derived_scales"] = scales_to_json(derive_scales(*cfg.physical));
  std::ofstream out(dir / "metadata.json");
  if (!out) throw SolverError("io: cannot open metadata.json");
  out << j.dump(2) << "\n";
}

inline void write_sweep_report(const std::filesystem::path& dir, const SweepReport& rep) {
  {
    std::ofstream out(dir / "sweep.csv");
    if (!out) throw SolverError("io: cannot open sweep.csv");
    out << std::setprecision(17);
    out << "eps,dt,filtered_l2,density_l2,pairing_dev,particle_drift,runtime_s\n";
    for (const SweepRow& r : rep.rows)
      out << r.eps << ',' << r.dt << ',' << r.filtered_l2 << ',' << r.density_l2 << ','
          << r.pairing_dev << ',' << r.particle_drift << ',' << r.runtime_s << '\n';
  }
  nlohmann::json j;
  j["version"] = version_string;
  j["limit_runtime_s"] = rep.limit_runtime_s;
  j["two_scale_runtime_s"] = rep.two_scale_runtime_s;
  j["filtered_monotone"] = rep.filtered_monotone;
  j["density_monotone"] = rep.density_monotone;
  j["pairing_monotone"] = rep.pairing_monotone;
  j["rows"] = nlohmann::json::array();
  for (const SweepRow& r : rep.rows)
    j["rows"].push_back({{"eps", r.eps}, {"dt", r.dt}, {"filtered_l2", r.filtered_l2},
                         {"density_l2", r.density_l2}, {"pairing_dev", r.pairing_dev},
                         {"particle_drift", r.particle_drift}, {"runtime_s", r.runtime_s}});
  std::ofstream out(dir / "sweep.json");
  if (!out) throw SolverError("io: cannot open sweep.json");
  out << j.dump(2) << "\n";
}

}  // namespace flr
