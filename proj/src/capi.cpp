#include "qie/qie.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <limits>
#include <new>
#include <optional>
#include <string>

#include <fmt/format.h>

#include "qie/config.hpp"
#include "qie/csv_io.hpp"
#include "qie/designer.hpp"
#include "qie/dynamics.hpp"
#include "qie/error.hpp"
#include "qie/report.hpp"
#include "qie/robustness.hpp"

struct qie_pulse {
  qie::Pulse pulse;
  std::optional<qie::AngleTrajectory> angles;
};

struct qie_trajectory {
  qie::StateTrajectory traj;
  qie::ErrorModel error;
  double fidelity;
};

struct qie_scan {
  qie::ScanResult result;
};

struct qie_config {
  qie::RunConfig config;
};

namespace {

thread_local std::string g_last_error;

qie_status status_of(qie::ErrorKind kind) {
  switch (kind) {
    case qie::ErrorKind::Parameter: return QIE_ERR_PARAMETER;
    case qie::ErrorKind::Singularity: return QIE_ERR_SINGULARITY;
    case qie::ErrorKind::Stiffness: return QIE_ERR_STIFFNESS;
    case qie::ErrorKind::Degeneracy: return QIE_ERR_DEGENERACY;
    case qie::ErrorKind::Tolerance: return QIE_ERR_TOLERANCE;
    case qie::ErrorKind::Design: return QIE_ERR_DESIGN;
    case qie::ErrorKind::Parse: return QIE_ERR_PARSE;
    case qie::ErrorKind::Grid: return QIE_ERR_GRID;
    case qie::ErrorKind::Io: return QIE_ERR_IO;
    case qie::ErrorKind::Scan: return QIE_ERR_SCAN;
  }
  return QIE_ERR_INTERNAL;
}

template <class F>
qie_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return QIE_OK;
  } catch (const qie::DesignFailure& e) {
    g_last_error = fmt::format("design failed ({}) at t = {}: {}", qie::to_string(e.cause()),
                               e.time(), e.what());
    return QIE_ERR_DESIGN;
  } catch (const qie::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return QIE_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QIE_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return QIE_ERR_INTERNAL;
  }
}

void require(const void* p, const char* name) {
  if (p == nullptr) throw qie::Error(qie::ErrorKind::Parameter, fmt::format("{} is null", name));
}

qie::DesignParams to_cpp(const qie_design_params& p) {
  qie::DesignParams d;
  d.c = p.c;
  d.T = p.T;
  d.kappa = p.kappa;
  d.n_samples = p.n_samples;
  d.branch_sign = p.branch_sign;
  if (p.beta_rate_init != QIE_BETA_RATE_ZERO && p.beta_rate_init != QIE_BETA_RATE_CONSISTENCY) {
    throw qie::Error(qie::ErrorKind::Parameter, "beta_rate_init must be 0 (zero) or 1 (consistency)");
  }
  d.beta_rate_init = p.beta_rate_init == QIE_BETA_RATE_ZERO ? qie::BetaRateInit::Zero
                                                            : qie::BetaRateInit::Consistency;
  d.beta_rate_sign = p.beta_rate_sign;
  d.ode_rel_tol = p.ode_rel_tol;
  d.ode_abs_tol = p.ode_abs_tol;
  d.omega_floor = p.omega_floor;
  return d;
}

std::string scan_label(const qie::Pulse& pulse) {
  if (pulse.design) return fmt::format("QIE c{:.3f}", pulse.design->c);
  return "pulse";
}

}  // namespace

extern "C" {

const char* qie_version(void) { return qie::kToolVersion; }

const char* qie_last_error(void) { return g_last_error.c_str(); }

const char* qie_status_string(qie_status status) {
  switch (status) {
    case QIE_OK: return "ok";
    case QIE_ERR_PARAMETER: return "parameter error";
    case QIE_ERR_SINGULARITY: return "singularity";
    case QIE_ERR_STIFFNESS: return "stiffness";
    case QIE_ERR_DEGENERACY: return "degeneracy";
    case QIE_ERR_TOLERANCE: return "tolerance failure";
    case QIE_ERR_DESIGN: return "design failure";
    case QIE_ERR_PARSE: return "parse error";
    case QIE_ERR_GRID: return "grid error";
    case QIE_ERR_IO: return "io error";
    case QIE_ERR_SCAN: return "scan failure";
    case QIE_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

int qie_exit_code(qie_status status) {
  switch (status) {
    case QIE_OK: return 0;
    case QIE_ERR_PARAMETER:
    case QIE_ERR_PARSE:
    case QIE_ERR_GRID: return 2;
    case QIE_ERR_IO: return 4;
    default: return 3;
  }
}

void qie_design_params_default(qie_design_params* params) {
  if (params == nullptr) return;
  const qie::DesignParams d;
  params->c = d.c;
  params->T = d.T;
  params->kappa = d.kappa;
  params->n_samples = d.n_samples;
  params->branch_sign = d.branch_sign;
  params->beta_rate_init = d.beta_rate_init == qie::BetaRateInit::Zero
                               ? QIE_BETA_RATE_ZERO
                               : QIE_BETA_RATE_CONSISTENCY;
  params->beta_rate_sign = d.beta_rate_sign;
  params->ode_rel_tol = d.ode_rel_tol;
  params->ode_abs_tol = d.ode_abs_tol;
  params->omega_floor = d.omega_floor;
}

qie_status qie_design(const qie_design_params* params, qie_pulse** out) {
  return guarded([&] {
    require(params, "params");
    require(out, "out");
    qie::DesignResult r = qie::design_pulse(to_cpp(*params));
    *out = new qie_pulse{std::move(r.pulse), std::move(r.angles)};
  });
}

qie_status qie_baseline_pi2(double duration, size_t n_samples, qie_pulse** out) {
  return guarded([&] {
    require(out, "out");
    *out = new qie_pulse{qie::pi_half_baseline(duration, n_samples), std::nullopt};
  });
}

qie_status qie_pulse_read_csv(const char* path, qie_pulse** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new qie_pulse{qie::read_pulse_csv(path), std::nullopt};
  });
}

qie_status qie_pulse_write_csv(const qie_pulse* pulse, const char* path, int precision) {
  return guarded([&] {
    require(pulse, "pulse");
    require(path, "path");
    qie::write_pulse_csv(pulse->pulse, pulse->angles ? &*pulse->angles : nullptr, path,
                         precision);
  });
}

size_t qie_pulse_size(const qie_pulse* pulse) {
  return pulse ? pulse->pulse.grid.size() : 0;
}

double qie_pulse_area(const qie_pulse* pulse) {
  return pulse ? pulse->pulse.area : std::numeric_limits<double>::quiet_NaN();
}

int qie_pulse_beta_final(const qie_pulse* pulse, double* beta_final) {
  if (!pulse || !pulse->pulse.beta_final) return 0;
  if (beta_final) *beta_final = *pulse->pulse.beta_final;
  return 1;
}

int qie_pulse_adiabaticity_residual(const qie_pulse* pulse, double* residual) {
  if (!pulse || !pulse->pulse.adiabaticity_residual) return 0;
  if (residual) *residual = *pulse->pulse.adiabaticity_residual;
  return 1;
}

qie_status qie_pulse_samples(const qie_pulse* pulse, double* t, double* omega, double* delta) {
  return guarded([&] {
    require(pulse, "pulse");
    const qie::Pulse& p = pulse->pulse;
    for (std::size_t i = 0; i < p.grid.size(); ++i) {
      if (t) t[i] = p.grid[i];
      if (omega) omega[i] = p.omega[i];
      if (delta) delta[i] = p.delta[i];
    }
  });
}

void qie_pulse_free(qie_pulse* pulse) { delete pulse; }

qie_status qie_simulate(const qie_pulse* pulse, double delta_omega, double delta_delta,
                        int substeps, qie_trajectory** out) {
  return guarded([&] {
    require(pulse, "pulse");
    require(out, "out");
    const qie::ErrorModel error{delta_omega, delta_delta};
    qie::StateTrajectory traj =
        qie::propagate(pulse->pulse, qie::QuantumState::ground(), error, substeps);
    double f = std::numeric_limits<double>::quiet_NaN();
    if (pulse->pulse.beta_final) {
      f = qie::fidelity(traj.final_state(), qie::nominal_target(pulse->pulse));
    }
    *out = new qie_trajectory{std::move(traj), error, f};
  });
}

size_t qie_trajectory_size(const qie_trajectory* traj) {
  return traj ? traj->traj.grid.size() : 0;
}

double qie_trajectory_fidelity(const qie_trajectory* traj) {
  return traj ? traj->fidelity : std::numeric_limits<double>::quiet_NaN();
}

double qie_trajectory_max_norm_drift(const qie_trajectory* traj) {
  return traj ? traj->traj.max_norm_drift() : std::numeric_limits<double>::quiet_NaN();
}

qie_status qie_trajectory_populations(const qie_trajectory* traj, double* pop1, double* pop2) {
  return guarded([&] {
    require(traj, "trajectory");
    for (std::size_t i = 0; i < traj->traj.grid.size(); ++i) {
      if (pop1) pop1[i] = traj->traj.pop1[i];
      if (pop2) pop2[i] = traj->traj.pop2[i];
    }
  });
}

qie_status qie_trajectory_write_csv(const qie_trajectory* traj, const char* path, int precision) {
  return guarded([&] {
    require(traj, "trajectory");
    require(path, "path");
    qie::write_trajectory_csv(traj->traj, {traj->error, "", traj->fidelity}, path, precision);
  });
}

void qie_trajectory_free(qie_trajectory* traj) { delete traj; }

qie_status qie_scan_run(const qie_pulse* pulse, qie_error_parameter parameter, double lo,
                        double hi, size_t n_points, const double* beta_final, qie_scan** out) {
  return guarded([&] {
    require(pulse, "pulse");
    require(out, "out");
    if (parameter != QIE_ERROR_RABI && parameter != QIE_ERROR_DETUNING) {
      throw qie::Error(qie::ErrorKind::Parameter, "unknown error parameter");
    }
    const qie::ErrorGrid grid{parameter == QIE_ERROR_RABI ? qie::ErrorParameter::Rabi
                                                          : qie::ErrorParameter::Detuning,
                              lo, hi, n_points};
    const qie::TargetState target =
        beta_final ? qie::TargetState{-*beta_final} : qie::nominal_target(pulse->pulse);
    *out = new qie_scan{qie::scan_1d(pulse->pulse, target, grid, scan_label(pulse->pulse))};
  });
}

size_t qie_scan_size(const qie_scan* scan) { return scan ? scan->result.deltas.size() : 0; }

qie_status qie_scan_values(const qie_scan* scan, double* deltas, double* fidelities) {
  return guarded([&] {
    require(scan, "scan");
    for (std::size_t i = 0; i < scan->result.deltas.size(); ++i) {
      if (deltas) deltas[i] = scan->result.deltas[i];
      if (fidelities) fidelities[i] = scan->result.fidelities[i];
    }
  });
}

double qie_scan_band_min(const qie_scan* scan, double half_width) {
  return scan ? scan->result.band_min(half_width) : std::numeric_limits<double>::quiet_NaN();
}

qie_status qie_scan_write_csv(const qie_scan* scan, const char* path, int precision) {
  return guarded([&] {
    require(scan, "scan");
    require(path, "path");
    qie::write_scan_csv(scan->result, path, precision);
  });
}

void qie_scan_free(qie_scan* scan) { delete scan; }

qie_status qie_config_parse(const char* text, qie_config** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new qie_config{qie::parse_config(text)};
  });
}

qie_status qie_config_load(const char* path, qie_config** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new qie_config{qie::load_config(path)};
  });
}

qie_status qie_config_set_output_dir(qie_config* config, const char* dir) {
  return guarded([&] {
    require(config, "config");
    require(dir, "dir");
    if (*dir == '\0') throw qie::Error(qie::ErrorKind::Parameter, "output_dir must be non-empty");
    config->config.output_dir = dir;
  });
}

void qie_config_free(qie_config* config) { delete config; }

qie_status qie_report(const qie_config* config, char** summary) {
  return guarded([&] {
    require(config, "config");
    const qie::ReportResult r = qie::run_report(config->config);
    if (summary) {
      char* s = new char[r.summary_text.size() + 1];
      std::memcpy(s, r.summary_text.c_str(), r.summary_text.size() + 1);
      *summary = s;
    }
  });
}

void qie_string_free(char* s) { delete[] s; }

}  // extern "C"
