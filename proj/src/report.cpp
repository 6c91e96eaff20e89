#include "qie/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <fmt/format.h>

#include "qie/csv_io.hpp"
#include "qie/designer.hpp"
#include "qie/dynamics.hpp"
#include "qie/error.hpp"
#include "qie/svg.hpp"

namespace qie {

namespace fs = std::filesystem;

namespace {

constexpr double kInteriorFraction = 0.95;
constexpr double kPi = std::numbers::pi;

std::string c_tag(double c) { return fmt::format("c{:.3f}", c); }

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
}

// True when the plus branch holds the population at the first sample.
bool follows_plus(const StateTrajectory& traj) {
  for (std::size_t i = 0; i < traj.adiab_pop_plus.size(); ++i) {
    if (std::isfinite(traj.adiab_pop_plus[i])) {
      return traj.adiab_pop_plus[i] >= traj.adiab_pop_minus[i];
    }
  }
  return false;
}

double min_followed_population(const StateTrajectory& traj) {
  const bool plus = follows_plus(traj);
  const auto& pops = plus ? traj.adiab_pop_plus : traj.adiab_pop_minus;
  double m = 1.0;
  for (std::size_t i = 0; i < pops.size(); ++i) {
    if (traj.grid.in_interior(traj.grid[i], kInteriorFraction) && std::isfinite(pops[i])) {
      m = std::min(m, pops[i]);
    }
  }
  return m;
}

std::vector<double> column_over_pi(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](double x) { return x / kPi; });
  return out;
}

}  // namespace

const ReferenceRow* find_reference(double c) {
  for (const ReferenceRow& row : kReferenceTable) {
    if (std::abs(row.c - c) < 1e-9) return &row;
  }
  return nullptr;
}

ReportResult run_report(const RunConfig& config) {
  config.validate();
  const fs::path out_dir(config.output_dir);
  ensure_dir(out_dir);
  ensure_dir(out_dir / "extras");
  if (config.emit_plots) ensure_dir(out_dir / "plots");

  ReportResult result;
  const int prec = config.csv_precision;
  auto record = [&](const fs::path& rel) {
    result.files.push_back(rel.generic_string());
    return (out_dir / rel).string();
  };

  std::vector<PlotSeries> omega_series, delta_series, adiab_series, rabi_series, detuning_series;

  for (double c : config.c_values) {
    DesignParams params = config.design;
    params.c = c;
    const DesignResult design = design_pulse(params);
    const Pulse& pulse = design.pulse;
    const std::string tag = c_tag(c);

    write_pulse_csv(pulse, &design.angles, record(fmt::format("pulse_{}.csv", tag)), prec);

    const TargetState target = nominal_target(pulse);
    const StateTrajectory traj = propagate(pulse, QuantumState::ground(), {}, config.substeps);
    const double f0 = fidelity(traj.final_state(), target);
    write_trajectory_csv(traj, {{}, fmt::format("pulse_{}.csv", tag), f0},
                         record(fmt::format("extras/trajectory_{}.csv", tag)), prec);

    DesignReport dr;
    dr.c = c;
    dr.area = pulse.area;
    dr.beta_final = *pulse.beta_final;
    dr.adiabaticity_residual = pulse.adiabaticity_residual.value_or(0.0);
    dr.nominal_fidelity = f0;
    for (double v : traj.bloch_v) dr.max_abs_v = std::max(dr.max_abs_v, std::abs(v));
    dr.min_followed_population = min_followed_population(traj);
    if (const ReferenceRow* ref = find_reference(c)) {
      dr.has_reference = true;
      dr.reference = *ref;
      dr.area_ok = std::abs(dr.area / kPi - ref->area_over_pi) <=
                   kAreaRelTolerance * ref->area_over_pi;
      dr.beta_final_ok = std::abs(dr.beta_final / kPi - ref->beta_final_over_pi) <=
                         kBetaFinalTolerance;
    }
    result.designs.push_back(dr);

    const std::string label = fmt::format("QIE {}", tag);
    for (const ErrorGrid& grid : {config.rabi_scan, config.detuning_scan}) {
      ScanResult scan = scan_1d(pulse, target, grid, label);
      write_scan_csv(scan, record(fmt::format("scan_{}_{}.csv", to_string(grid.parameter), tag)),
                     prec);
      (grid.parameter == ErrorParameter::Rabi ? rabi_series : detuning_series)
          .push_back({label, scan.deltas, scan.fidelities});
      result.scans.push_back(std::move(scan));
    }

    if (config.emit_plots) {
      const std::vector<double> t = pulse.grid.samples();
      omega_series.push_back({tag, t, pulse.omega});
      delta_series.push_back({tag, t, pulse.delta});
      adiab_series.push_back({tag, t, design.angles.adiabaticity});
      write_svg_plot(record(fmt::format("plots/populations_{}.svg", tag)),
                     fmt::format("Populations, {}", tag), "t / T", "population",
                     {{"P1", t, traj.pop1}, {"P2", t, traj.pop2}});
      write_svg_plot(record(fmt::format("plots/bloch_{}.svg", tag)),
                     fmt::format("Bloch vector, {}", tag), "t / T", "component",
                     {{"u", t, traj.bloch_u}, {"v", t, traj.bloch_v}, {"w", t, traj.bloch_w}});
      write_svg_plot(record(fmt::format("plots/angles_{}.svg", tag)),
                     fmt::format("Angles, {}", tag), "t / T", "angle / pi",
                     {{"theta", t, column_over_pi([&] {
                         std::vector<double> th;
                         for (const ThetaSample& s : design.angles.theta) th.push_back(s.theta);
                         return th;
                       }())},
                      {"beta", t, column_over_pi(design.angles.beta)}});
    }
  }

  const double duration = 2.0 * config.design.kappa * config.design.T;
  const Pulse baseline = pi_half_baseline(duration, config.design.n_samples);
  write_pulse_csv(baseline, nullptr, record("extras/pulse_pi2.csv"), prec);
  for (const ErrorGrid& grid : {config.rabi_scan, config.detuning_scan}) {
    ScanResult scan = scan_1d(baseline, nominal_target(baseline), grid, "pi/2 pulse");
    write_scan_csv(scan, record(fmt::format("extras/scan_{}_pi2.csv", to_string(grid.parameter))),
                   prec);
    (grid.parameter == ErrorParameter::Rabi ? rabi_series : detuning_series)
        .push_back({"pi/2", scan.deltas, scan.fidelities});
    result.scans.push_back(std::move(scan));
  }
  result.robustness = robustness_summary(result.scans);

  std::string& s = result.summary_text;
  s += fmt::format("qie report (tool version {})\n\n", kToolVersion);
  s += fmt::format("design: T={} kappa={} n={} branch_sign={} beta_rate_init={} beta_rate_sign={}\n\n",
                   config.design.T, config.design.kappa, config.design.n_samples,
                   config.design.branch_sign, to_string(config.design.beta_rate_init),
                   config.design.beta_rate_sign);
  s += "Design table (angles and areas in units of pi)\n";
  s += fmt::format("{:>7} {:>12} {:>10} {:>6} {:>12} {:>10} {:>6}\n", "c", "beta_f", "ref", "ok",
                   "area", "ref", "ok");
  for (const DesignReport& d : result.designs) {
    if (d.has_reference) {
      s += fmt::format("{:>7.3f} {:>12.5f} {:>10.3f} {:>6} {:>12.5f} {:>10.3f} {:>6}\n", d.c,
                       d.beta_final / kPi, d.reference.beta_final_over_pi,
                       d.beta_final_ok ? "PASS" : "FAIL", d.area / kPi,
                       d.reference.area_over_pi, d.area_ok ? "PASS" : "FAIL");
    } else {
      s += fmt::format("{:>7.3f} {:>12.5f} {:>10} {:>6} {:>12.5f} {:>10} {:>6}\n", d.c,
                       d.beta_final / kPi, "-", "-", d.area / kPi, "-", "-");
    }
  }
  s += fmt::format("tolerances: area {}% relative, beta_f +-{} pi\n\n", kAreaRelTolerance * 100,
                   kBetaFinalTolerance);
  s += "Design diagnostics\n";
  s += fmt::format("{:>7} {:>14} {:>14} {:>10} {:>16}\n", "c", "adiab_resid/c", "F(0)",
                   "max|v|", "min_followed_pop");
  for (const DesignReport& d : result.designs) {
    s += fmt::format("{:>7.3f} {:>14.3e} {:>14.10f} {:>10.5f} {:>16.6f}\n", d.c,
                     d.adiabaticity_residual / d.c, d.nominal_fidelity, d.max_abs_v,
                     d.min_followed_population);
  }
  s += "\nRobustness\n";
  s += result.robustness.to_text();
  s += "\nFiles\n";
  for (const std::string& f : result.files) s += "  " + f + "\n";

  if (config.emit_plots) {
    write_svg_plot(record("plots/omega.svg"), "Rabi frequency", "t / T", "Omega T", omega_series);
    write_svg_plot(record("plots/delta.svg"), "Detuning", "t / T", "Delta T", delta_series);
    write_svg_plot(record("plots/adiabaticity.svg"), "Adiabaticity parameter", "t / T",
                   "parameter", adiab_series);
    write_svg_plot(record("plots/scan_rabi.svg"), "Rabi frequency error", "delta_Omega",
                   "fidelity", rabi_series);
    write_svg_plot(record("plots/scan_detuning.svg"), "Detuning error", "delta_Delta",
                   "fidelity", detuning_series);
  }

  const std::string summary_path = record("summary.txt");
  std::ofstream out(summary_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + summary_path + "' for writing");
  out << s;
  if (!out) throw Error(ErrorKind::Io, "write to '" + summary_path + "' failed");
  return result;
}

}  // namespace qie
