/* C interface to the quasiadiabatic inverse-engineering library.
 *
 * Objects are opaque handles released with the matching qie_*_free call.
 * Every fallible function returns a qie_status; on failure the message is
 * available from qie_last_error() on the calling thread. */
#ifndef QIE_QIE_H
#define QIE_QIE_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(QIE_BUILDING_LIBRARY)
#    define QIE_API __declspec(dllexport)
#  else
#    define QIE_API __declspec(dllimport)
#  endif
#else
#  define QIE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qie_status {
  QIE_OK = 0,
  QIE_ERR_PARAMETER = 1,
  QIE_ERR_SINGULARITY = 2,
  QIE_ERR_STIFFNESS = 3,
  QIE_ERR_DEGENERACY = 4,
  QIE_ERR_TOLERANCE = 5,
  QIE_ERR_DESIGN = 6,
  QIE_ERR_PARSE = 7,
  QIE_ERR_GRID = 8,
  QIE_ERR_IO = 9,
  QIE_ERR_SCAN = 10,
  QIE_ERR_INTERNAL = 11
} qie_status;

typedef enum qie_beta_rate_init {
  QIE_BETA_RATE_ZERO = 0,
  QIE_BETA_RATE_CONSISTENCY = 1
} qie_beta_rate_init;

typedef enum qie_error_parameter {
  QIE_ERROR_RABI = 0,
  QIE_ERROR_DETUNING = 1
} qie_error_parameter;

typedef struct qie_design_params {
  double c;
  double T;
  double kappa;
  size_t n_samples;
  int branch_sign;
  int beta_rate_init; /* qie_beta_rate_init */
  int beta_rate_sign;
  double ode_rel_tol;
  double ode_abs_tol;
  double omega_floor;
} qie_design_params;

typedef struct qie_pulse qie_pulse;
typedef struct qie_trajectory qie_trajectory;
typedef struct qie_scan qie_scan;
typedef struct qie_config qie_config;

QIE_API const char* qie_version(void);
QIE_API const char* qie_last_error(void);
QIE_API const char* qie_status_string(qie_status status);
/* Process exit code for a status: 0 ok, 2 argument/config, 3 numerical, 4 IO. */
QIE_API int qie_exit_code(qie_status status);

QIE_API void qie_design_params_default(qie_design_params* params);

/* Pulses */
QIE_API qie_status qie_design(const qie_design_params* params, qie_pulse** out);
QIE_API qie_status qie_baseline_pi2(double duration, size_t n_samples, qie_pulse** out);
QIE_API qie_status qie_pulse_read_csv(const char* path, qie_pulse** out);
QIE_API qie_status qie_pulse_write_csv(const qie_pulse* pulse, const char* path, int precision);
QIE_API size_t qie_pulse_size(const qie_pulse* pulse);
QIE_API double qie_pulse_area(const qie_pulse* pulse);
/* Return 1 and store the value when present, else 0. */
QIE_API int qie_pulse_beta_final(const qie_pulse* pulse, double* beta_final);
QIE_API int qie_pulse_adiabaticity_residual(const qie_pulse* pulse, double* residual);
/* Copies qie_pulse_size() samples into each non-null array. */
QIE_API qie_status qie_pulse_samples(const qie_pulse* pulse, double* t, double* omega,
                                     double* delta);
QIE_API void qie_pulse_free(qie_pulse* pulse);

/* Propagation from |1> with relative errors on Omega and Delta. */
QIE_API qie_status qie_simulate(const qie_pulse* pulse, double delta_omega, double delta_delta,
                                int substeps, qie_trajectory** out);
QIE_API size_t qie_trajectory_size(const qie_trajectory* traj);
/* Fidelity against the pulse's nominal target; NaN when the pulse has no beta_final. */
QIE_API double qie_trajectory_fidelity(const qie_trajectory* traj);
QIE_API double qie_trajectory_max_norm_drift(const qie_trajectory* traj);
QIE_API qie_status qie_trajectory_populations(const qie_trajectory* traj, double* pop1,
                                              double* pop2);
QIE_API qie_status qie_trajectory_write_csv(const qie_trajectory* traj, const char* path,
                                            int precision);
QIE_API void qie_trajectory_free(qie_trajectory* traj);

/* Scans. beta_final overrides the pulse metadata when non-null; the target is
 * then the equal-weight state with phase -(*beta_final). */
QIE_API qie_status qie_scan_run(const qie_pulse* pulse, qie_error_parameter parameter, double lo,
                                double hi, size_t n_points, const double* beta_final,
                                qie_scan** out);
QIE_API size_t qie_scan_size(const qie_scan* scan);
QIE_API qie_status qie_scan_values(const qie_scan* scan, double* deltas, double* fidelities);
QIE_API double qie_scan_band_min(const qie_scan* scan, double half_width);
QIE_API qie_status qie_scan_write_csv(const qie_scan* scan, const char* path, int precision);
QIE_API void qie_scan_free(qie_scan* scan);

/* Run configuration and the full report. */
QIE_API qie_status qie_config_parse(const char* text, qie_config** out);
QIE_API qie_status qie_config_load(const char* path, qie_config** out);
QIE_API qie_status qie_config_set_output_dir(qie_config* config, const char* dir);
QIE_API void qie_config_free(qie_config* config);
/* Writes the report files; *summary (optional) receives the summary text,
 * released with qie_string_free. */
QIE_API qie_status qie_report(const qie_config* config, char** summary);
QIE_API void qie_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* QIE_QIE_H */
