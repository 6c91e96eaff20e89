#include "qie/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include "json.hpp"

#include "qie/error.hpp"

namespace qie {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  std::vector<std::string> unknown;
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) unknown.push_back(key);
  }
  if (!unknown.empty()) {
    throw Error(ErrorKind::Parse, fmt::format("unknown key(s) in {}: {}", where,
                                              fmt::join(unknown, ", ")));
  }
}

const json& require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorKind::Parse, where + " must be an object");
  return j;
}

template <class T>
void read_field(const json& obj, const char* key, const std::string& where, T& out) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->template get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::Parse, fmt::format("{}.{} has the wrong type", where, key));
  }
}

// Integer fields reject fractional and negative JSON numbers instead of truncating.
void read_count(const json& obj, const char* key, const std::string& where, std::size_t& out) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  if (!it->is_number_integer() || it->get<long long>() < 0) {
    throw Error(ErrorKind::Parse,
                fmt::format("{}.{} must be a non-negative integer", where, key));
  }
  out = it->get<std::size_t>();
}

void read_int(const json& obj, const char* key, const std::string& where, int& out) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  if (!it->is_number_integer()) {
    throw Error(ErrorKind::Parse, fmt::format("{}.{} must be an integer", where, key));
  }
  out = it->get<int>();
}

DesignParams parse_design(const json& j) {
  require_object(j, "design");
  reject_unknown(j,
                 {"c", "T", "kappa", "n_samples", "branch_sign", "beta_rate_init",
                  "beta_rate_sign", "ode_rel_tol", "ode_abs_tol", "omega_floor"},
                 "design");
  DesignParams p;
  read_field(j, "c", "design", p.c);
  read_field(j, "T", "design", p.T);
  read_field(j, "kappa", "design", p.kappa);
  read_count(j, "n_samples", "design", p.n_samples);
  read_int(j, "branch_sign", "design", p.branch_sign);
  read_int(j, "beta_rate_sign", "design", p.beta_rate_sign);
  std::string init = to_string(p.beta_rate_init);
  read_field(j, "beta_rate_init", "design", init);
  p.beta_rate_init = beta_rate_init_from_string(init);
  read_field(j, "ode_rel_tol", "design", p.ode_rel_tol);
  read_field(j, "ode_abs_tol", "design", p.ode_abs_tol);
  read_field(j, "omega_floor", "design", p.omega_floor);
  return p;
}

ErrorGrid parse_grid(const json& j, ErrorParameter parameter, const std::string& where) {
  require_object(j, where);
  reject_unknown(j, {"lo", "hi", "n_points"}, where);
  ErrorGrid g{parameter, -0.5, 0.5, 101};
  read_field(j, "lo", where, g.lo);
  read_field(j, "hi", where, g.hi);
  read_count(j, "n_points", where, g.n_points);
  return g;
}

json grid_json(const ErrorGrid& g) {
  return json{{"lo", g.lo}, {"hi", g.hi}, {"n_points", g.n_points}};
}

}  // namespace

std::string default_output_dir() {
  if (const char* env = std::getenv("QIE_OUTPUT_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return "qie_out";
}

void RunConfig::validate() const {
  try {
    design.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::Parameter, std::string("design.") + e.what());
  }
  if (c_values.empty()) throw Error(ErrorKind::Parameter, "report.c_values must not be empty");
  for (double c : c_values) {
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw Error(ErrorKind::Parameter, "report.c_values entries must be > 0");
    }
  }
  for (const auto* g : {&rabi_scan, &detuning_scan}) {
    try {
      g->validate();
    } catch (const Error& e) {
      throw Error(ErrorKind::Parameter,
                  fmt::format("scans.{}: {}", to_string(g->parameter), e.what()));
    }
  }
  if (substeps < 1) throw Error(ErrorKind::Parameter, "substeps must be >= 1");
  if (output_dir.empty()) throw Error(ErrorKind::Parameter, "output_dir must not be empty");
  if (csv_precision < 1 || csv_precision > 17) {
    throw Error(ErrorKind::Parameter, "csv_precision must be in [1, 17]");
  }
}

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, std::string("config is not valid JSON: ") + e.what());
  }
  require_object(root, "config");
  reject_unknown(root, {"design", "report", "scans", "substeps", "output_dir", "emit_plots",
                        "csv_precision"},
                 "config");
  RunConfig cfg;
  cfg.output_dir = default_output_dir();
  if (auto it = root.find("design"); it != root.end()) cfg.design = parse_design(*it);
  if (auto it = root.find("report"); it != root.end()) {
    require_object(*it, "report");
    reject_unknown(*it, {"c_values"}, "report");
    read_field(*it, "c_values", "report", cfg.c_values);
  }
  if (auto it = root.find("scans"); it != root.end()) {
    require_object(*it, "scans");
    reject_unknown(*it, {"rabi", "detuning"}, "scans");
    if (auto g = it->find("rabi"); g != it->end()) {
      cfg.rabi_scan = parse_grid(*g, ErrorParameter::Rabi, "scans.rabi");
    }
    if (auto g = it->find("detuning"); g != it->end()) {
      cfg.detuning_scan = parse_grid(*g, ErrorParameter::Detuning, "scans.detuning");
    }
  }
  read_int(root, "substeps", "config", cfg.substeps);
  read_field(root, "output_dir", "config", cfg.output_dir);
  read_field(root, "emit_plots", "config", cfg.emit_plots);
  read_int(root, "csv_precision", "config", cfg.csv_precision);
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& cfg) {
  const DesignParams& d = cfg.design;
  json j;
  j["design"] = {{"c", d.c},
                 {"T", d.T},
                 {"kappa", d.kappa},
                 {"n_samples", d.n_samples},
                 {"branch_sign", d.branch_sign},
                 {"beta_rate_init", to_string(d.beta_rate_init)},
                 {"beta_rate_sign", d.beta_rate_sign},
                 {"ode_rel_tol", d.ode_rel_tol},
                 {"ode_abs_tol", d.ode_abs_tol},
                 {"omega_floor", d.omega_floor}};
  j["report"] = {{"c_values", cfg.c_values}};
  j["scans"] = {{"rabi", grid_json(cfg.rabi_scan)}, {"detuning", grid_json(cfg.detuning_scan)}};
  j["substeps"] = cfg.substeps;
  j["output_dir"] = cfg.output_dir;
  j["emit_plots"] = cfg.emit_plots;
  j["csv_precision"] = cfg.csv_precision;
  return j.dump(2) + "\n";
}

}  // namespace qie
