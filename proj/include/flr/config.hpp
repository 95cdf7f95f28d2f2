#pragma once

// Run configuration: a small INI-style format (sections, key = value, # or ;
// comments) parsed into a validated RunConfig, plus builders for the initial
// datum and the electron background.

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "flr/core.hpp"
#include "flr/fields.hpp"
#include "flr/geometry.hpp"
#include "flr/scaling.hpp"
#include "flr/vlasov.hpp"

namespace flr {

enum class ModelKind { eps, limit_g, two_scale };

inline std::string model_name(ModelKind m) {
  switch (m) {
    case ModelKind::eps: return "eps";
    case ModelKind::limit_g: return "limit-g";
    case ModelKind::two_scale: return "two-scale";
  }
  return "?";
}

struct RunConfig {
  ModelKind model = ModelKind::eps;
  GyroGrid grid;

  double eps = 0.1;
  double dt = 0.0;        // 0 = choose automatically
  double t_end = 1.0;
  int n_quad = 32;
  int snapshot_every = 0;  // 0 = only initial and final
  int diag_every = 1;
  std::string out_dir = "out";

  // Initial datum: Maxwellian in velocity with an in-plane cosine
  // perturbation, f0 = A/(2 pi w) exp(-|v|^2 / (2w)) (1 + delta cos(m1 x1 + m2 x2)).
  double amplitude = 1.0;
  double width = 1.0;
  double delta = 0.1;
  int mode_m1 = 1;
  int mode_m2 = 0;

  // Electron background n_e(x) = value (1 + ne_delta cos(ne_m1 x1 + ne_m2 x2)),
  // or a tabulated grid read from a raw little-endian float64 file.
  double ne_value = 1.0;
  double ne_delta = 0.0;
  int ne_m1 = 1;
  int ne_m2 = 0;
  std::string ne_file;

  bool auto_normalize = true;
  double cutoff_tol = 1e-8;

  std::optional<PhysicalParams> physical;
};

namespace detail {

using IniData = std::map<std::string, std::map<std::string, std::string>>;

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline IniData parse_ini(std::istream& in) {
  IniData data;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto cpos = line.find_first_of("#;");
    if (cpos != std::string::npos) line.erase(cpos);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    data[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return data;
}

struct IniReader {
  const IniData& data;

  std::optional<std::string> raw(const std::string& sec, const std::string& key) const {
    auto s = data.find(sec);
    if (s == data.end()) return std::nullopt;
    auto k = s->second.find(key);
    if (k == s->second.end()) return std::nullopt;
    return k->second;
  }

  template <typename T>
  void get(const std::string& sec, const std::string& key, T& out) const {
    auto v = raw(sec, key);
    if (!v) return;
    std::istringstream ss(*v);
    T tmp;
    ss >> tmp;
    if (ss.fail()) throw ConfigError("config: bad value for " + sec + "." + key + ": " + *v);
    out = tmp;
  }

  void get(const std::string& sec, const std::string& key, bool& out) const {
    auto v = raw(sec, key);
    if (!v) return;
    if (*v == "true" || *v == "1" || *v == "yes") out = true;
    else if (*v == "false" || *v == "0" || *v == "no") out = false;
    else throw ConfigError("config: bad boolean for " + sec + "." + key + ": " + *v);
  }

  void get(const std::string& sec, const std::string& key, std::string& out) const {
    auto v = raw(sec, key);
    if (v) out = *v;
  }
};

}  // namespace detail

inline RunConfig parse_config(std::istream& in) {
  const auto data = detail::parse_ini(in);
  detail::IniReader r{data};
  RunConfig cfg;

  std::string model = "eps";
  r.get("run", "model", model);
  if (model == "eps") cfg.model = ModelKind::eps;
  else if (model == "limit-g") cfg.model = ModelKind::limit_g;
  else if (model == "two-scale") cfg.model = ModelKind::two_scale;
  else throw ConfigError("config: run.model must be eps, limit-g or two-scale (got " + model + ")");

  r.get("run", "eps", cfg.eps);
  r.get("run", "dt", cfg.dt);
  r.get("run", "t_end", cfg.t_end);
  r.get("run", "n_quad", cfg.n_quad);
  r.get("run", "snapshot_every", cfg.snapshot_every);
  r.get("run", "diag_every", cfg.diag_every);
  r.get("run", "out_dir", cfg.out_dir);
  r.get("run", "auto_normalize", cfg.auto_normalize);
  r.get("run", "cutoff_tol", cfg.cutoff_tol);

  r.get("grid", "n_x1", cfg.grid.n_x1);
  r.get("grid", "n_x2", cfg.grid.n_x2);
  r.get("grid", "n_k", cfg.grid.n_k);
  r.get("grid", "n_alpha", cfg.grid.n_alpha);
  r.get("grid", "k_max", cfg.grid.k_max);
  r.get("grid", "k_offset", cfg.grid.k_offset);

  r.get("initial", "amplitude", cfg.amplitude);
  r.get("initial", "width", cfg.width);
  r.get("initial", "delta", cfg.delta);
  r.get("initial", "mode_m1", cfg.mode_m1);
  r.get("initial", "mode_m2", cfg.mode_m2);

  r.get("electrons", "value", cfg.ne_value);
  r.get("electrons", "delta", cfg.ne_delta);
  r.get("electrons", "mode_m1", cfg.ne_m1);
  r.get("electrons", "mode_m2", cfg.ne_m2);
  r.get("electrons", "file", cfg.ne_file);

  if (data.count("physical")) {
    PhysicalParams p;
    r.get("physical", "e", p.e);
    r.get("physical", "m_i", p.m_i);
    r.get("physical", "epsilon_0", p.epsilon_0);
    r.get("physical", "B", p.B);
    r.get("physical", "v", p.v);
    r.get("physical", "lambda_D", p.lambda_D);
    r.get("physical", "L_parallel", p.L_parallel);
    r.get("physical", "n", p.n);
    cfg.physical = p;
  }

  // Validation.
  cfg.grid.validate();
  if (!(cfg.eps > 0.0)) throw ConfigError("config: run.eps must be > 0");
  if (!(cfg.t_end > 0.0)) throw ConfigError("config: run.t_end must be > 0");
  if (cfg.dt < 0.0) throw ConfigError("config: run.dt must be >= 0");
  if (cfg.n_quad < 4) throw ConfigError("config: run.n_quad must be >= 4");
  if (cfg.snapshot_every < 0) throw ConfigError("config: run.snapshot_every must be >= 0");
  if (cfg.diag_every < 1) throw ConfigError("config: run.diag_every must be >= 1");
  if (!(cfg.amplitude > 0.0)) throw ConfigError("config: initial.amplitude must be > 0");
  if (!(cfg.width > 0.0)) throw ConfigError("config: initial.width must be > 0");
  if (std::abs(cfg.delta) >= 1.0) throw ConfigError("config: |initial.delta| must be < 1");
  if (!(cfg.ne_value > 0.0)) throw ConfigError("config: electrons.value must be > 0");
  if (cfg.physical) cfg.physical->validate();
  return cfg;
}

inline RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  return parse_config(in);
}

inline double effective_dt(const RunConfig& cfg) {
  if (cfg.dt > 0.0) return cfg.dt;
  return cfg.model == ModelKind::eps ? default_eps_dt(cfg.eps) : 0.05;
}

inline CartDensity make_initial(const RunConfig& cfg) {
  const double a = cfg.amplitude, w = cfg.width, d = cfg.delta;
  const int m1 = cfg.mode_m1, m2 = cfg.mode_m2;
  return [a, w, d, m1, m2](double x1, double x2, double v1, double v2) {
    const double maxw = a / (two_pi * w) * std::exp(-0.5 * (v1 * v1 + v2 * v2) / w);
    return maxw * (1.0 + d * std::cos(m1 * x1 + m2 * x2));
  };
}

inline Array2 make_electrons(const RunConfig& cfg) {
  Array2 n_e(cfg.grid.n_x1, cfg.grid.n_x2);
  if (!cfg.ne_file.empty()) {
    std::ifstream in(cfg.ne_file, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open electrons.file " + cfg.ne_file);
    in.read(reinterpret_cast<char*>(n_e.data()),
            static_cast<std::streamsize>(n_e.size() * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(n_e.size() * sizeof(double)))
      throw ConfigError("config: electrons.file " + cfg.ne_file + " has wrong size (need " +
                        std::to_string(n_e.size()) + " float64 values)");
    for (std::size_t i = 0; i < n_e.size(); ++i)
      if (!(n_e.data()[i] > 0.0))
        throw ConfigError("config: electrons.file values must be > 0");
    return n_e;
  }
  for (int i = 0; i < cfg.grid.n_x1; ++i)
    for (int j = 0; j < cfg.grid.n_x2; ++j)
      n_e(i, j) = cfg.ne_value *
                  (1.0 + cfg.ne_delta *
                             std::cos(cfg.ne_m1 * cfg.grid.x1_node(i) +
                                      cfg.ne_m2 * cfg.grid.x2_node(j)));
  return n_e;
}

}  // namespace flr
