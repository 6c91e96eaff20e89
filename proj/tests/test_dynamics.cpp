#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "qie/designer.hpp"
#include "qie/dynamics.hpp"
#include "qie/error.hpp"

using namespace qie;
using std::numbers::pi;

namespace {

const double kR = 1.0 / std::sqrt(2.0);

double distance(const QuantumState& a, const QuantumState& b) {
  return std::sqrt(std::norm(a.amp1 - b.amp1) + std::norm(a.amp2 - b.amp2));
}

Pulse constant_pulse(double omega, double delta, double duration, std::size_t n) {
  const TimeGrid g(0.0, duration, n);
  return {g, std::vector<double>(n, omega), std::vector<double>(n, delta), omega * duration,
          {}, {}, {}};
}

// Smooth chirped Gaussian used for the convergence-order check.
Pulse chirped_pulse(std::size_t n) {
  const TimeGrid g(-4.0, 4.0, n);
  Pulse p{g, std::vector<double>(n), std::vector<double>(n), 0.0, {}, {}, {}};
  for (std::size_t i = 0; i < n; ++i) {
    p.omega[i] = 3.0 * std::exp(-g[i] * g[i] / 2.0);
    p.delta[i] = 2.0 * std::tanh(g[i]);
  }
  return p;
}

// Applies H = (1/2)[[-delta, omega], [omega, delta]] to v.
QuantumState apply_h(double omega, double delta, const QuantumState& v) {
  return {0.5 * (-delta * v.amp1 + omega * v.amp2), 0.5 * (omega * v.amp1 + delta * v.amp2)};
}

}  // namespace

TEST_CASE("target state examples") {
  const QuantumState a = target_state(0.0);
  CHECK(std::abs(a.amp1 - Complex{kR, 0}) < 1e-15);
  CHECK(std::abs(a.amp2 - Complex{kR, 0}) < 1e-15);
  const QuantumState b = target_state(pi);
  CHECK(std::abs(b.amp1 - Complex{0, -kR}) < 1e-15);
  CHECK(std::abs(b.amp2 - Complex{0, kR}) < 1e-15);
  for (double beta : {-2.0, 0.3, 5.0}) CHECK(target_state(beta).norm() == doctest::Approx(1.0));
}

TEST_CASE("step_evolve closed-form rotations") {
  const QuantumState g = QuantumState::ground();
  const QuantumState same = step_evolve(g, 0.0, 0.0, 3.0);
  CHECK(same.amp1 == g.amp1);
  CHECK(same.amp2 == g.amp2);

  const QuantumState flipped = step_evolve(g, pi, 0.0, 1.0);
  CHECK(std::norm(flipped.amp1) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(std::norm(flipped.amp2) == doctest::Approx(1.0));

  // exp(-i (pi/4) sx) |1> = (1, -i)/sqrt(2).
  const QuantumState half = step_evolve(g, pi / 2, 0.0, 1.0);
  CHECK(distance(half, {Complex{kR, 0}, Complex{0, -kR}}) < 1e-15);

  // Pure detuning: |1> picks up exp(+i Delta dt / 2).
  const QuantumState phase = step_evolve(g, 0.0, 0.8, 1.5);
  CHECK(std::abs(phase.amp1 - std::exp(Complex{0, 0.6})) < 1e-15);
}

TEST_CASE("step_evolve is unitary and composes") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  QuantumState s{Complex{0.6, 0.0}, Complex{0.0, 0.8}};
  for (int k = 0; k < 1000; ++k) s = step_evolve(s, d(rng), d(rng), 0.37);
  CHECK(std::abs(s.norm() - 1.0) < 1e-12);
  const QuantumState one = step_evolve(s, 1.3, -0.4, 0.5);
  const QuantumState two = step_evolve(step_evolve(s, 1.3, -0.4, 0.2), 1.3, -0.4, 0.3);
  CHECK(distance(one, two) < 1e-14);
}

TEST_CASE("fidelity examples") {
  const QuantumState t = target_state(0.7);
  CHECK(fidelity(t, TargetState{0.7}) == doctest::Approx(1.0));
  CHECK(fidelity(QuantumState::ground(), TargetState{1.9}) == doctest::Approx(0.5));
  const QuantumState orth = target_state(0.7 + pi);
  CHECK(fidelity(orth, TargetState{0.7}) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("bloch vectors") {
  const Bloch n = bloch_from_angles(0.0, 1.0);
  CHECK(n.u == 0.0);
  CHECK(n.w == 1.0);
  const Bloch e = bloch_from_angles(pi / 2, 0.0);
  CHECK(e.u == doctest::Approx(1.0));
  CHECK(std::abs(e.w) < 1e-15);
  // State (cos(theta/2) e^{-i beta/2}, sin(theta/2) e^{i beta/2}).
  const double th = pi / 3, b = pi / 5;
  const QuantumState s{std::cos(th / 2) * std::exp(Complex{0, -b / 2}),
                       std::sin(th / 2) * std::exp(Complex{0, b / 2})};
  const Bloch x = bloch_from_state(s), y = bloch_from_angles(th, b);
  CHECK(std::abs(x.u - y.u) < 1e-12);
  CHECK(std::abs(x.v - y.v) < 1e-12);
  CHECK(std::abs(x.w - y.w) < 1e-12);
}

TEST_CASE("instantaneous eigenbasis") {
  const Eigenbasis d = instantaneous_eigenbasis(0.0, 2.0);
  CHECK(d.eigval_minus == doctest::Approx(-1.0));
  CHECK(d.eigval_plus == doctest::Approx(1.0));
  CHECK(std::abs(d.eigvec_minus.amp1 - 1.0) < 1e-15);
  CHECK(std::abs(d.eigvec_plus.amp2 - 1.0) < 1e-15);

  const Eigenbasis x = instantaneous_eigenbasis(2.0, 0.0);
  CHECK(x.eigval_minus == doctest::Approx(-1.0));
  CHECK(std::abs(x.eigvec_minus.amp1 - kR) < 1e-15);
  CHECK(std::abs(x.eigvec_minus.amp2 + kR) < 1e-15);
  CHECK(std::abs(x.eigvec_plus.amp1 - kR) < 1e-15);
  CHECK(std::abs(x.eigvec_plus.amp2 - kR) < 1e-15);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  for (int k = 0; k < 200; ++k) {
    const double om = dist(rng), de = dist(rng);
    const Eigenbasis e = instantaneous_eigenbasis(om, de);
    const auto dot = [](const QuantumState& a, const QuantumState& b) {
      return std::conj(a.amp1) * b.amp1 + std::conj(a.amp2) * b.amp2;
    };
    CHECK(std::abs(dot(e.eigvec_minus, e.eigvec_minus) - 1.0) < 1e-12);
    CHECK(std::abs(dot(e.eigvec_plus, e.eigvec_plus) - 1.0) < 1e-12);
    CHECK(std::abs(dot(e.eigvec_minus, e.eigvec_plus)) < 1e-12);
    const QuantumState hm = apply_h(om, de, e.eigvec_minus);
    CHECK(distance(hm, {e.eigval_minus * e.eigvec_minus.amp1,
                        e.eigval_minus * e.eigvec_minus.amp2}) < 1e-12);
    const QuantumState hp = apply_h(om, de, e.eigvec_plus);
    CHECK(distance(hp, {e.eigval_plus * e.eigvec_plus.amp1,
                        e.eigval_plus * e.eigvec_plus.amp2}) < 1e-12);
  }
  CHECK_THROWS_AS(instantaneous_eigenbasis(0.0, 0.0), Error);
}

TEST_CASE("adiabatic populations") {
  const Eigenbasis e = instantaneous_eigenbasis(1.2, -0.7);
  const AdiabaticPopulations p = adiabatic_populations(e.eigvec_minus, 1.2, -0.7);
  CHECK(p.minus == doctest::Approx(1.0));
  CHECK(p.plus == doctest::Approx(0.0).epsilon(1e-15));
  const AdiabaticPopulations q = adiabatic_populations(target_state(0.4), 0.3, 2.0);
  CHECK(q.minus + q.plus == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(adiabatic_populations(target_state(0.4), 0.0, 0.0), Error);
}

TEST_CASE("zero pulse leaves the state fixed") {
  const Pulse p = constant_pulse(0.0, 0.0, 2.0, 101);
  const StateTrajectory t = propagate(p, QuantumState::ground());
  for (std::size_t i = 0; i < t.states.size(); ++i) {
    CHECK(t.pop1[i] == 1.0);
    CHECK(std::isnan(t.adiab_pop_minus[i]));
  }
}

TEST_CASE("propagation matches the resonant rotation") {
  const Pulse p = constant_pulse(pi / 2 / 8.0, 0.0, 8.0, 4001);
  const QuantumState f = propagate_final(p, QuantumState::ground());
  CHECK(distance(f, {Complex{kR, 0}, Complex{0, -kR}}) < 1e-12);
  const StateTrajectory t = propagate(p, QuantumState::ground());
  CHECK(distance(t.final_state(), f) < 1e-15);
  CHECK(t.max_norm_drift() <= 1e-9);
  for (std::size_t i = 0; i < t.states.size(); ++i) {
    CHECK(t.pop1[i] + t.pop2[i] == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("midpoint propagation is second order") {
  const Pulse p = chirped_pulse(201);
  const QuantumState ref = propagate_final(p, QuantumState::ground(), {}, 64);
  // Linear interpolation is exact for the reference and all levels, so only the
  // midpoint sampling error differs between substep counts.
  const double e1 = distance(propagate_final(p, QuantumState::ground(), {}, 4), ref);
  const double e2 = distance(propagate_final(p, QuantumState::ground(), {}, 8), ref);
  const double e4 = distance(propagate_final(p, QuantumState::ground(), {}, 16), ref);
  CAPTURE(e1);
  CAPTURE(e2);
  CAPTURE(e4);
  CHECK(e1 / e2 >= 3.0);
  CHECK(e2 / e4 >= 3.0);
}

TEST_CASE("error model scales the pulse") {
  const Pulse p = constant_pulse(pi / 2 / 8.0, 0.0, 8.0, 801);
  for (double d : {-0.3, 0.2}) {
    const QuantumState f = propagate_final(p, QuantumState::ground(), {d, 0.0});
    const double angle = (1.0 + d) * pi / 2;
    CHECK(std::norm(f.amp1) == doctest::Approx(std::pow(std::cos(angle / 2), 2)).epsilon(1e-12));
  }
  // Multiplicative detuning error on a resonant pulse has no effect.
  const QuantumState g = propagate_final(p, QuantumState::ground(), {0.0, 0.4});
  CHECK(distance(g, propagate_final(p, QuantumState::ground())) < 1e-15);
}

TEST_CASE("nominal target requires beta_final") {
  const Pulse p = constant_pulse(1.0, 0.0, 1.0, 11);
  CHECK_THROWS_AS(nominal_target(p), Error);
  Pulse q = p;
  q.beta_final = 0.3;
  CHECK(nominal_target(q).beta_final == -0.3);
}

TEST_CASE("designed pulse reaches its target") {
  DesignParams params;
  params.c = 0.073;
  const DesignResult r = design_pulse(params);
  const StateTrajectory t = propagate(r.pulse, QuantumState::ground());
  CHECK(t.pop1.back() == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(fidelity(t.final_state(), nominal_target(r.pulse)) >= 0.9999);
  // The unconjugated phase is the wrong target.
  CHECK(fidelity(t.final_state(), TargetState{*r.pulse.beta_final}) < 0.99);
  CHECK(t.max_norm_drift() <= 1e-9);
  for (std::size_t i = 0; i < t.states.size(); ++i) {
    const double b2 = t.bloch_u[i] * t.bloch_u[i] + t.bloch_v[i] * t.bloch_v[i] +
                      t.bloch_w[i] * t.bloch_w[i];
    REQUIRE(std::abs(b2 - 1.0) <= 1e-9);
    if (std::isfinite(t.adiab_pop_minus[i])) {
      REQUIRE(t.adiab_pop_minus[i] + t.adiab_pop_plus[i] == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("design and dynamics Bloch paths converge with grid refinement") {
  auto deviation = [](std::size_t n) {
    DesignParams params;
    params.c = 0.073;
    params.n_samples = n;
    const DesignResult r = design_pulse(params);
    const StateTrajectory t = propagate(r.pulse, QuantumState::ground());
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Bloch b = bloch_from_angles(r.angles.theta[i].theta, -r.angles.beta[i]);
      worst = std::max({worst, std::abs(b.u - t.bloch_u[i]), std::abs(b.v - t.bloch_v[i]),
                        std::abs(b.w - t.bloch_w[i])});
    }
    return worst;
  };
  const double coarse = deviation(4001);
  const double fine = deviation(256001);
  CAPTURE(coarse);
  CAPTURE(fine);
  CHECK(fine < coarse / 2);
  CHECK(fine <= 1e-3);
}
