#pragma once

#include <optional>
#include <string>
#include <span>
#include <vector>

#include "qie/profiles.hpp"

namespace qie {

// Choice of beta_dot at the start of the window. The start point is singular
// (theta -> 0), so the rate is a modelling choice rather than a derived value.
enum class BetaRateInit { Zero, Consistency };

const char* to_string(BetaRateInit init) noexcept;
BetaRateInit beta_rate_init_from_string(const std::string& name);

struct DesignParams {
  double c = 0.073;
  double T = 1.0;
  double kappa = 4.0;          // window is [-kappa T, kappa T]
  std::size_t n_samples = 4001;
  int branch_sign = -1;        // sign of (Omega' Delta - Omega Delta')
  BetaRateInit beta_rate_init = BetaRateInit::Consistency;
  int beta_rate_sign = -1;     // sign of beta_dot(t_i) for the consistency start
  double ode_rel_tol = 1e-9;
  double ode_abs_tol = 1e-11;
  double omega_floor = 1e-10;  // in units of 1/T

  void validate() const;
  TimeGrid grid() const { return TimeGrid(-kappa * T, kappa * T, n_samples); }

  friend bool operator==(const DesignParams&, const DesignParams&) = default;
};

/// Provenance of a designed pulse, carried through CSV metadata.
struct DesignMetadata {
  double c = 0.0;
  double T = 0.0;
  double kappa = 0.0;
  int branch_sign = -1;
  BetaRateInit beta_rate_init = BetaRateInit::Consistency;
  int beta_rate_sign = -1;
};

struct Pulse {
  TimeGrid grid;
  std::vector<double> omega;
  std::vector<double> delta;
  double area = 0.0;  // integral of |Omega| dt, radians
  // Final invariant phase beta(t_f). The state the pulse physically produces
  // under exp(-iHt) is the equal-weight target with phase -beta_final, see
  // nominal_target().
  std::optional<double> beta_final;
  std::optional<double> adiabaticity_residual;
  std::optional<DesignMetadata> design;
};

struct AngleTrajectory {
  TimeGrid grid;
  std::vector<ThetaSample> theta;
  std::vector<double> beta;
  std::vector<double> beta_dot;
  std::vector<double> beta_ddot;
  std::vector<double> adiabaticity;  // achieved parameter per sample
};

struct DesignResult {
  Pulse pulse;
  AngleTrajectory angles;
};

struct RabiDetuning {
  double omega = 0.0;
  double delta = 0.0;
};

/// Omega, Delta and their time derivatives along an angle trajectory.
struct PulseRates {
  double omega = 0.0;
  double omega_dot = 0.0;
  double delta = 0.0;
  double delta_dot = 0.0;
};

/// Omega = theta_dot / sin(beta), Delta = beta_dot - theta_dot cot(theta) cot(beta).
RabiDetuning invert_angles(const ThetaSample& theta, double beta, double beta_dot);

/// Chain-rule derivatives of invert_angles for a known beta_ddot.
PulseRates pulse_rates(const ThetaSample& theta, double beta, double beta_dot,
                       double beta_ddot);

double adiabaticity_parameter(double omega, double omega_dot, double delta,
                              double delta_dot);

inline double adiabaticity_parameter(const PulseRates& r) {
  return adiabaticity_parameter(r.omega, r.omega_dot, r.delta, r.delta_dot);
}

// Solves |Omega' Delta - Omega Delta'| = 2c (Omega^2 + Delta^2)^{3/2} for
// beta_ddot on the branch where the signed left side has sign branch_sign.
// Throws Stiffness when |Omega| < omega_floor.
double beta_acceleration(const ThetaSample& theta, double beta, double beta_dot,
                         double c, int branch_sign, double omega_floor = 0.0);

double initial_beta_rate(const DesignParams& params);

DesignResult design_pulse(const DesignParams& params);

/// Composite Simpson rule on uniform samples; the last three intervals use
/// the 3/8 rule when the interval count is odd.
double simpson(std::span<const double> values, double step);

/// Integral of |Omega| over the pulse grid (composite Simpson).
double pulse_area(const Pulse& pulse);

}  // namespace qie
