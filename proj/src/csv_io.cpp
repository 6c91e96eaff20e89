#include "qie/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "qie/error.hpp"

namespace qie {

namespace {

constexpr double kUniformTolerance = 1e-8;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "write to '" + path + "' failed");
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& text, double& value) {
  const std::string s = trim(text);
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last;
}

std::optional<double> meta_number(const CsvTable& t, const std::string& key) {
  auto it = t.metadata.find(key);
  if (it == t.metadata.end()) return std::nullopt;
  double v = 0.0;
  if (!parse_double(it->second, v)) {
    throw Error(ErrorKind::Parse, "metadata '" + key + "' is not a number");
  }
  return v;
}

}  // namespace

std::string format_number(double value, int precision) {
  if (std::isnan(value)) return "nan";
  return fmt::format("{:.{}g}", value, precision);
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw Error(ErrorKind::Parse, "missing column '" + name + "'");
}

CsvTable read_csv_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos) {
        table.metadata[trim(line.substr(1, eq - 1))] = trim(line.substr(eq + 1));
      }
      continue;
    }
    if (table.header.empty()) {
      for (const auto& f : split(line, ',')) table.header.push_back(trim(f));
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != table.header.size()) {
      throw Error(ErrorKind::Parse,
                  fmt::format("{}:{}: expected {} fields, found {}", path, line_no,
                              table.header.size(), fields.size()));
    }
    std::vector<double> row(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (!parse_double(fields[i], row[i])) {
        throw Error(ErrorKind::Parse, fmt::format("{}:{}: cannot parse '{}' as a number", path,
                                                  line_no, trim(fields[i])));
      }
    }
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw Error(ErrorKind::Parse, path + ": no header row");
  return table;
}

void write_pulse_csv(const Pulse& pulse, const AngleTrajectory* angles,
                     const std::string& path, int precision) {
  const std::size_t n = pulse.grid.size();
  if (pulse.omega.size() != n || pulse.delta.size() != n) {
    throw Error(ErrorKind::Parameter, "pulse arrays do not match the grid length");
  }
  if (angles != nullptr &&
      (angles->beta.size() != n || angles->theta.size() != n || angles->adiabaticity.size() != n)) {
    throw Error(ErrorKind::Parameter, "angle trajectory does not match the pulse length");
  }
  auto num = [precision](double v) { return format_number(v, precision); };
  std::ofstream out = open_out(path);
  out << "#format=qie-pulse\n";
  out << "#tool_version=" << kToolVersion << "\n";
  if (pulse.design) {
    const DesignMetadata& d = *pulse.design;
    out << "#c=" << num(d.c) << "\n";
    out << "#T=" << num(d.T) << "\n";
    out << "#kappa=" << num(d.kappa) << "\n";
    out << "#branch_sign=" << d.branch_sign << "\n";
    out << "#beta_rate_init=" << to_string(d.beta_rate_init) << "\n";
    out << "#beta_rate_sign=" << d.beta_rate_sign << "\n";
  }
  out << "#area=" << num(pulse.area) << "\n";
  out << "#area_over_pi=" << num(pulse.area / std::numbers::pi) << "\n";
  if (pulse.beta_final) out << "#beta_final=" << num(*pulse.beta_final) << "\n";
  if (pulse.adiabaticity_residual) {
    out << "#adiabaticity_residual=" << num(*pulse.adiabaticity_residual) << "\n";
  }
  out << (angles ? "t,omega,delta,theta,beta,adiabaticity\n" : "t,omega,delta\n");
  for (std::size_t i = 0; i < n; ++i) {
    out << num(pulse.grid[i]) << ',' << num(pulse.omega[i]) << ',' << num(pulse.delta[i]);
    if (angles) {
      out << ',' << num(angles->theta[i].theta) << ',' << num(angles->beta[i]) << ','
          << num(angles->adiabaticity[i]);
    }
    out << '\n';
  }
  finish(out, path);
}

Pulse read_pulse_csv(const std::string& path) {
  const CsvTable table = read_csv_table(path);
  auto column = [&](const char* name) {
    try {
      return table.column(name);
    } catch (const Error& e) {
      throw Error(ErrorKind::Parse, path + ": " + e.what());
    }
  };
  const std::size_t ct = column("t");
  const std::size_t co = column("omega");
  const std::size_t cd = column("delta");
  const std::size_t n = table.rows.size();
  if (n < 3) throw Error(ErrorKind::Parse, path + ": a pulse needs at least 3 samples");

  const double t0 = table.rows.front()[ct];
  const double t1 = table.rows.back()[ct];
  const TimeGrid grid(t0, t1, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(table.rows[i][ct] - grid[i]) > kUniformTolerance * std::max(1.0, grid.step() * n)) {
      throw Error(ErrorKind::Grid,
                  fmt::format("{}: time column is not uniform at sample {}", path, i));
    }
  }
  Pulse p{grid, std::vector<double>(n), std::vector<double>(n), 0.0, {}, {}, {}};
  for (std::size_t i = 0; i < n; ++i) {
    p.omega[i] = table.rows[i][co];
    p.delta[i] = table.rows[i][cd];
  }
  p.area = meta_number(table, "area").value_or(pulse_area(p));
  p.beta_final = meta_number(table, "beta_final");
  p.adiabaticity_residual = meta_number(table, "adiabaticity_residual");
  const auto c = meta_number(table, "c");
  const auto T = meta_number(table, "T");
  const auto kappa = meta_number(table, "kappa");
  if (c && T && kappa) {
    DesignMetadata d;
    d.c = *c;
    d.T = *T;
    d.kappa = *kappa;
    d.branch_sign = static_cast<int>(meta_number(table, "branch_sign").value_or(-1));
    d.beta_rate_sign = static_cast<int>(meta_number(table, "beta_rate_sign").value_or(-1));
    if (auto it = table.metadata.find("beta_rate_init"); it != table.metadata.end()) {
      d.beta_rate_init = beta_rate_init_from_string(it->second);
    }
    p.design = d;
  }
  return p;
}

void write_trajectory_csv(const StateTrajectory& tr, const TrajectoryMetadata& meta,
                          const std::string& path, int precision) {
  auto num = [precision](double v) { return format_number(v, precision); };
  std::ofstream out = open_out(path);
  out << "#format=qie-trajectory\n";
  out << "#tool_version=" << kToolVersion << "\n";
  if (!meta.pulse_source.empty()) out << "#pulse=" << meta.pulse_source << "\n";
  out << "#delta_omega=" << num(meta.error.rabi) << "\n";
  out << "#delta_delta=" << num(meta.error.detuning) << "\n";
  out << "#fidelity=" << num(meta.fidelity) << "\n";
  out << "t,pop1,pop2,u,v,w,p_minus,p_plus\n";
  for (std::size_t i = 0; i < tr.grid.size(); ++i) {
    out << num(tr.grid[i]) << ',' << num(tr.pop1[i]) << ',' << num(tr.pop2[i]) << ','
        << num(tr.bloch_u[i]) << ',' << num(tr.bloch_v[i]) << ',' << num(tr.bloch_w[i]) << ','
        << num(tr.adiab_pop_minus[i]) << ',' << num(tr.adiab_pop_plus[i]) << '\n';
  }
  finish(out, path);
}

void write_scan_csv(const ScanResult& r, const std::string& path, int precision) {
  auto num = [precision](double v) { return format_number(v, precision); };
  std::ofstream out = open_out(path);
  out << "#format=qie-scan\n";
  out << "#tool_version=" << kToolVersion << "\n";
  out << "#protocol=" << r.protocol_label << "\n";
  out << "#parameter=" << to_string(r.grid.parameter) << "\n";
  out << "#area=" << num(r.area) << "\n";
  out << "#min_fidelity_band_0.2=" << num(r.min_fidelity_in_band) << "\n";
  out << "delta,fidelity\n";
  for (std::size_t i = 0; i < r.deltas.size(); ++i) {
    out << num(r.deltas[i]) << ',' << num(r.fidelities[i]) << '\n';
  }
  finish(out, path);
}

}  // namespace qie
