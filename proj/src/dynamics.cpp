#include "qie/dynamics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "qie/error.hpp"

namespace qie {

namespace {

constexpr Complex kI{0.0, 1.0};

double lerp(double a, double b, double s) { return a + s * (b - a); }

double unwrap(double angle, double previous) {
  using std::numbers::pi;
  while (angle - previous > pi) angle -= 2.0 * pi;
  while (angle - previous < -pi) angle += 2.0 * pi;
  return angle;
}

template <class OnSample>
QuantumState run(const Pulse& pulse, const QuantumState& initial, const ErrorModel& error,
                 int substeps, OnSample&& on_sample) {
  if (substeps < 1) throw Error(ErrorKind::Parameter, "substeps must be >= 1");
  const std::size_t n = pulse.grid.size();
  if (pulse.omega.size() != n || pulse.delta.size() != n) {
    throw Error(ErrorKind::Parameter, "pulse sample count does not match its grid");
  }
  const double scale_omega = 1.0 + error.rabi;
  const double scale_delta = 1.0 + error.detuning;

  QuantumState psi = initial;
  on_sample(0, psi, scale_omega * pulse.omega[0], scale_delta * pulse.delta[0]);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = (pulse.grid[i + 1] - pulse.grid[i]) / substeps;
    for (int j = 0; j < substeps; ++j) {
      const double s = (j + 0.5) / substeps;
      psi = step_evolve(psi, scale_omega * lerp(pulse.omega[i], pulse.omega[i + 1], s),
                        scale_delta * lerp(pulse.delta[i], pulse.delta[i + 1], s), h);
    }
    on_sample(i + 1, psi, scale_omega * pulse.omega[i + 1], scale_delta * pulse.delta[i + 1]);
  }
  return psi;
}

}  // namespace

QuantumState target_state(double beta_final) {
  const double r = 1.0 / std::numbers::sqrt2;
  return {r * std::exp(-0.5 * kI * beta_final), r * std::exp(0.5 * kI * beta_final)};
}

QuantumState step_evolve(const QuantumState& state, double omega, double delta, double dt) {
  const double energy = 0.5 * std::hypot(omega, delta);
  if (energy == 0.0) return state;
  const double c = std::cos(energy * dt);
  const double s = std::sin(energy * dt) / (2.0 * energy);
  // U = cos(E dt) I - i sin(E dt)/(2E) (Omega sx - Delta sz)
  const Complex u11{c, s * delta};
  const Complex u22{c, -s * delta};
  const Complex u12{0.0, -s * omega};
  return {u11 * state.amp1 + u12 * state.amp2, u12 * state.amp1 + u22 * state.amp2};
}

Bloch bloch_from_angles(double theta, double beta) {
  return {std::sin(theta) * std::cos(beta), std::sin(theta) * std::sin(beta), std::cos(theta)};
}

Bloch bloch_from_state(const QuantumState& s) {
  const Complex coherence = std::conj(s.amp1) * s.amp2;
  return {2.0 * coherence.real(), 2.0 * coherence.imag(),
          std::norm(s.amp1) - std::norm(s.amp2)};
}

Eigenbasis instantaneous_eigenbasis(double omega, double delta) {
  return instantaneous_eigenbasis(omega, delta, std::atan2(omega, delta));
}

Eigenbasis instantaneous_eigenbasis(double omega, double delta, double mixing_angle) {
  const double gap = std::hypot(omega, delta);
  if (!(gap > 0.0)) {
    throw Error(ErrorKind::Degeneracy, "eigenbasis is degenerate at Omega = Delta = 0");
  }
  const double c = std::cos(0.5 * mixing_angle);
  const double s = std::sin(0.5 * mixing_angle);
  Eigenbasis e;
  e.eigval_minus = -0.5 * gap;
  e.eigval_plus = 0.5 * gap;
  e.eigvec_minus = {Complex{c, 0.0}, Complex{-s, 0.0}};
  e.eigvec_plus = {Complex{s, 0.0}, Complex{c, 0.0}};
  return e;
}

namespace {

AdiabaticPopulations project(const QuantumState& state, const Eigenbasis& e) {
  auto overlap = [&](const QuantumState& v) {
    return std::norm(std::conj(v.amp1) * state.amp1 + std::conj(v.amp2) * state.amp2);
  };
  return {overlap(e.eigvec_minus), overlap(e.eigvec_plus)};
}

}  // namespace

AdiabaticPopulations adiabatic_populations(const QuantumState& state, double omega,
                                           double delta) {
  return project(state, instantaneous_eigenbasis(omega, delta));
}

double fidelity(const QuantumState& a, const QuantumState& b) {
  const Complex overlap = std::conj(a.amp1) * b.amp1 + std::conj(a.amp2) * b.amp2;
  return std::min(1.0, std::norm(overlap));
}

double fidelity(const QuantumState& final_state, const TargetState& target) {
  return fidelity(final_state, target_state(target));
}

TargetState nominal_target(const Pulse& pulse) {
  if (!pulse.beta_final) {
    throw Error(ErrorKind::Parameter, "pulse carries no beta_final; supply a target explicitly");
  }
  // The (theta, beta) angle equations inverted by the designer describe the
  // complex conjugate of the state evolved by exp(-iHt), so the physical
  // relative phase is -beta.
  return TargetState{-*pulse.beta_final};
}

double StateTrajectory::max_norm_drift() const {
  double drift = 0.0;
  for (const auto& s : states) drift = std::max(drift, std::abs(s.norm() - 1.0));
  return drift;
}

StateTrajectory propagate(const Pulse& pulse, const QuantumState& initial,
                          const ErrorModel& error, int substeps) {
  const std::size_t n = pulse.grid.size();
  StateTrajectory out{pulse.grid, {}, {}, {}, {}, {}, {}, {}, {}};
  out.states.resize(n);
  for (auto* v : {&out.pop1, &out.pop2, &out.bloch_u, &out.bloch_v, &out.bloch_w,
                  &out.adiab_pop_minus, &out.adiab_pop_plus}) {
    v->resize(n);
  }
  double phi = 0.0;
  bool have_phi = false;
  run(pulse, initial, error, substeps,
      [&](std::size_t i, const QuantumState& psi, double omega, double delta) {
        out.states[i] = psi;
        out.pop1[i] = std::norm(psi.amp1);
        out.pop2[i] = std::norm(psi.amp2);
        const Bloch b = bloch_from_state(psi);
        out.bloch_u[i] = b.u;
        out.bloch_v[i] = b.v;
        out.bloch_w[i] = b.w;
        if (omega == 0.0 && delta == 0.0) {
          out.adiab_pop_minus[i] = std::numeric_limits<double>::quiet_NaN();
          out.adiab_pop_plus[i] = std::numeric_limits<double>::quiet_NaN();
          return;
        }
        const double raw = std::atan2(omega, delta);
        phi = have_phi ? unwrap(raw, phi) : raw;
        have_phi = true;
        const AdiabaticPopulations p =
            project(psi, instantaneous_eigenbasis(omega, delta, phi));
        out.adiab_pop_minus[i] = p.minus;
        out.adiab_pop_plus[i] = p.plus;
      });
  return out;
}

QuantumState propagate_final(const Pulse& pulse, const QuantumState& initial,
                             const ErrorModel& error, int substeps) {
  return run(pulse, initial, error, substeps,
             [](std::size_t, const QuantumState&, double, double) {});
}

}  // namespace qie
