#pragma once

#include <complex>
#include <vector>

#include "qie/designer.hpp"
#include "qie/profiles.hpp"

namespace qie {

using Complex = std::complex<double>;

/// Two-level pure state on the {|1>, |2>} basis.
struct QuantumState {
  Complex amp1{1.0, 0.0};
  Complex amp2{0.0, 0.0};

  double norm() const { return std::sqrt(std::norm(amp1) + std::norm(amp2)); }
  static QuantumState ground() { return {}; }
};

/// Equal-weight target superposition (e^{-i b/2}, e^{i b/2}) / sqrt(2).
struct TargetState {
  double beta_final = 0.0;
};

QuantumState target_state(double beta_final);
inline QuantumState target_state(const TargetState& t) { return target_state(t.beta_final); }

// exp(-i H dt) for H = (1/2)[[-Delta, Omega], [Omega, Delta]].
QuantumState step_evolve(const QuantumState& state, double omega, double delta, double dt);

/// Relative (multiplicative) systematic errors on Omega and Delta.
struct ErrorModel {
  double rabi = 0.0;
  double detuning = 0.0;
};

struct Bloch {
  double u = 0.0;
  double v = 0.0;
  double w = 0.0;
};

Bloch bloch_from_angles(double theta, double beta);
Bloch bloch_from_state(const QuantumState& state);

struct Eigenbasis {
  double eigval_minus = 0.0;
  double eigval_plus = 0.0;
  QuantumState eigvec_minus;
  QuantumState eigvec_plus;
};

// Eigenvectors are parameterized by the mixing angle phi = atan2(Omega, Delta):
// minus = (cos(phi/2), -sin(phi/2)), plus = (sin(phi/2), cos(phi/2)). Passing
// an unwrapped phi keeps the vectors continuous along a trajectory.
Eigenbasis instantaneous_eigenbasis(double omega, double delta);
Eigenbasis instantaneous_eigenbasis(double omega, double delta, double mixing_angle);

struct AdiabaticPopulations {
  double minus = 0.0;
  double plus = 0.0;
};

AdiabaticPopulations adiabatic_populations(const QuantumState& state, double omega,
                                           double delta);

double fidelity(const QuantumState& final_state, const TargetState& target);
double fidelity(const QuantumState& a, const QuantumState& b);

/// State the pulse is designed to reach from |1> under exp(-iHt).
TargetState nominal_target(const Pulse& pulse);

struct StateTrajectory {
  TimeGrid grid;
  std::vector<QuantumState> states;
  std::vector<double> pop1, pop2;
  std::vector<double> bloch_u, bloch_v, bloch_w;
  // NaN at samples where Omega = Delta = 0.
  std::vector<double> adiab_pop_minus, adiab_pop_plus;

  const QuantumState& final_state() const { return states.back(); }
  double max_norm_drift() const;
};

/// Piecewise-constant propagation: each grid interval is split into
/// `substeps` pieces, each evolved with the exact 2x2 unitary of the
/// linearly interpolated Hamiltonian at the piece midpoint.
StateTrajectory propagate(const Pulse& pulse, const QuantumState& initial,
                          const ErrorModel& error = {}, int substeps = 2);

/// Final state only; skips the per-sample diagnostics.
QuantumState propagate_final(const Pulse& pulse, const QuantumState& initial,
                             const ErrorModel& error = {}, int substeps = 2);

}  // namespace qie
