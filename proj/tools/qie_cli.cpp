// Command-line front end over the C API.
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "qie/qie.h"

namespace {

constexpr double kPi = 3.14159265358979323846;

struct RangeSpec {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 0;
};

std::optional<RangeSpec> parse_range(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t pos; (pos = text.find(':', start)) != std::string::npos; start = pos + 1) {
    parts.push_back(text.substr(start, pos - start));
  }
  parts.push_back(text.substr(start));
  if (parts.size() != 3) return std::nullopt;
  RangeSpec r;
  auto parse_double = [](const std::string& s, double& v) {
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    return !s.empty() && res.ec == std::errc() && res.ptr == s.data() + s.size() &&
           std::isfinite(v);
  };
  const std::string& ns = parts[2];
  const auto res = std::from_chars(ns.data(), ns.data() + ns.size(), r.n);
  if (!parse_double(parts[0], r.lo) || !parse_double(parts[1], r.hi) || ns.empty() ||
      res.ec != std::errc() || res.ptr != ns.data() + ns.size()) {
    return std::nullopt;
  }
  return r;
}

int fail(qie_status status) {
  std::fprintf(stderr, "error: %s: %s\n", qie_status_string(status), qie_last_error());
  return qie_exit_code(status);
}

int usage_error(const std::string& message) {
  std::fprintf(stderr, "error: %s\n", message.c_str());
  return 2;
}

int run_design(const qie_design_params& params, const std::string& out, int precision) {
  qie_pulse* pulse = nullptr;
  if (qie_status s = qie_design(&params, &pulse); s != QIE_OK) return fail(s);
  double beta_final = 0.0, residual = 0.0;
  qie_pulse_beta_final(pulse, &beta_final);
  qie_pulse_adiabaticity_residual(pulse, &residual);
  fmt::print("c = {}\narea = {:.6f} pi\nbeta_final = {:.6f} pi\nadiabaticity_residual = {:.3e}\n",
             params.c, qie_pulse_area(pulse) / kPi, beta_final / kPi, residual);
  const qie_status s = qie_pulse_write_csv(pulse, out.c_str(), precision);
  qie_pulse_free(pulse);
  return s == QIE_OK ? 0 : fail(s);
}

int run_simulate(const std::string& in, double d_omega, double d_delta, int substeps,
                 const std::string& out, int precision) {
  qie_pulse* pulse = nullptr;
  if (qie_status s = qie_pulse_read_csv(in.c_str(), &pulse); s != QIE_OK) return fail(s);
  qie_trajectory* traj = nullptr;
  qie_status s = qie_simulate(pulse, d_omega, d_delta, substeps, &traj);
  qie_pulse_free(pulse);
  if (s != QIE_OK) return fail(s);
  const double f = qie_trajectory_fidelity(traj);
  if (std::isfinite(f)) fmt::print("fidelity = {:.10f}\n", f);
  fmt::print("max_norm_drift = {:.3e}\n", qie_trajectory_max_norm_drift(traj));
  s = qie_trajectory_write_csv(traj, out.c_str(), precision);
  qie_trajectory_free(traj);
  return s == QIE_OK ? 0 : fail(s);
}

int run_scan(const std::string& in, const std::string& param, const RangeSpec& range,
             std::optional<double> beta_final, const std::string& out, int precision) {
  const qie_error_parameter p = param == "rabi" ? QIE_ERROR_RABI : QIE_ERROR_DETUNING;
  qie_pulse* pulse = nullptr;
  if (qie_status s = qie_pulse_read_csv(in.c_str(), &pulse); s != QIE_OK) return fail(s);
  if (!beta_final && !qie_pulse_beta_final(pulse, nullptr)) {
    qie_pulse_free(pulse);
    return usage_error("pulse file carries no beta_final; pass --beta-final");
  }
  qie_scan* scan = nullptr;
  qie_status s = qie_scan_run(pulse, p, range.lo, range.hi, range.n,
                              beta_final ? &*beta_final : nullptr, &scan);
  qie_pulse_free(pulse);
  if (s != QIE_OK) return fail(s);
  fmt::print("points = {}\nmin_fidelity(|delta|<=0.2) = {:.8f}\n", qie_scan_size(scan),
             qie_scan_band_min(scan, 0.2));
  s = qie_scan_write_csv(scan, out.c_str(), precision);
  qie_scan_free(scan);
  return s == QIE_OK ? 0 : fail(s);
}

int run_baseline(double duration, std::size_t n, const std::string& out, int precision) {
  qie_pulse* pulse = nullptr;
  if (qie_status s = qie_baseline_pi2(duration, n, &pulse); s != QIE_OK) return fail(s);
  fmt::print("area = {:.6f} pi\n", qie_pulse_area(pulse) / kPi);
  const qie_status s = qie_pulse_write_csv(pulse, out.c_str(), precision);
  qie_pulse_free(pulse);
  return s == QIE_OK ? 0 : fail(s);
}

int run_report(const std::string& config_path, const std::string& out_dir) {
  qie_config* config = nullptr;
  if (qie_status s = qie_config_load(config_path.c_str(), &config); s != QIE_OK) return fail(s);
  if (!out_dir.empty()) {
    if (qie_status s = qie_config_set_output_dir(config, out_dir.c_str()); s != QIE_OK) {
      qie_config_free(config);
      return fail(s);
    }
  }
  char* summary = nullptr;
  const qie_status s = qie_report(config, &summary);
  qie_config_free(config);
  if (s != QIE_OK) return fail(s);
  std::fputs(summary, stdout);
  qie_string_free(summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasiadiabatic inverse-engineering pulse designer"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qie_version()));
  int precision = 12;
  app.add_option("--precision", precision, "Significant digits in CSV output")
      ->check(CLI::Range(1, 17));

  qie_design_params params;
  qie_design_params_default(&params);
  std::string beta_init = "consistency";
  std::string design_out;
  auto* design = app.add_subcommand("design", "Design a constant-adiabaticity pulse");
  design->add_option("--c", params.c, "Adiabaticity constant")->required();
  design->add_option("--T", params.T, "Time scale of the theta profile");
  design->add_option("--kappa", params.kappa, "Half window in units of T");
  design->add_option("--n", params.n_samples, "Number of time samples");
  design->add_option("--branch", params.branch_sign, "Branch sign")
      ->check(CLI::IsMember({-1, 1}));
  design->add_option("--beta-init", beta_init, "Initial beta rate")
      ->check(CLI::IsMember({"zero", "consistency"}));
  design->add_option("--beta-sign", params.beta_rate_sign, "Sign of the initial beta rate")
      ->check(CLI::IsMember({-1, 1}));
  design->add_option("--out", design_out, "Pulse CSV path")->required();

  std::string sim_pulse, sim_out;
  double d_omega = 0.0, d_delta = 0.0;
  int substeps = 2;
  auto* simulate = app.add_subcommand("simulate", "Propagate |1> under a pulse");
  simulate->add_option("--pulse", sim_pulse, "Pulse CSV path")->required();
  simulate->add_option("--delta-omega", d_omega, "Relative Rabi frequency error");
  simulate->add_option("--delta-delta", d_delta, "Relative detuning error");
  simulate->add_option("--substeps", substeps, "Propagator substeps per interval")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--out", sim_out, "Trajectory CSV path")->required();

  std::string scan_pulse, scan_param, scan_range, scan_out;
  std::optional<double> scan_beta;
  auto* scan = app.add_subcommand("scan", "Fidelity scan over a systematic error");
  scan->add_option("--pulse", scan_pulse, "Pulse CSV path")->required();
  scan->add_option("--param", scan_param, "rabi or detuning")
      ->required()
      ->check(CLI::IsMember({"rabi", "detuning"}));
  scan->add_option("--range", scan_range, "lo:hi:n")->required();
  scan->add_option("--beta-final", scan_beta, "Override the pulse's beta_final (radians)");
  scan->add_option("--out", scan_out, "Scan CSV path")->required();

  double duration = 1.0;
  std::size_t baseline_n = 4001;
  std::string baseline_out;
  auto* baseline = app.add_subcommand("baseline", "Reference pulses");
  baseline->require_subcommand(1);
  auto* pi2 = baseline->add_subcommand("pi2", "Resonant pi/2 pulse");
  pi2->add_option("--duration", duration, "Pulse duration")->required();
  pi2->add_option("--n", baseline_n, "Number of time samples");
  pi2->add_option("--out", baseline_out, "Pulse CSV path")->required();

  std::string config_path, report_out;
  auto* report = app.add_subcommand("report", "Design all c values and write every output");
  report->add_option("--config", config_path, "Run configuration (JSON)")->required();
  report->add_option("--output-dir", report_out, "Override output_dir from the config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (design->parsed()) {
    params.beta_rate_init = beta_init == "zero" ? QIE_BETA_RATE_ZERO : QIE_BETA_RATE_CONSISTENCY;
    return run_design(params, design_out, precision);
  }
  if (simulate->parsed()) return run_simulate(sim_pulse, d_omega, d_delta, substeps, sim_out, precision);
  if (scan->parsed()) {
    const auto range = parse_range(scan_range);
    if (!range) return usage_error("--range must be lo:hi:n, got '" + scan_range + "'");
    return run_scan(scan_pulse, scan_param, *range, scan_beta, scan_out, precision);
  }
  if (pi2->parsed()) return run_baseline(duration, baseline_n, baseline_out, precision);
  if (report->parsed()) return run_report(config_path, report_out);
  return 2;
}
