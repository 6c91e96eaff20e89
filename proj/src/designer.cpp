#include "qie/designer.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/numeric/odeint.hpp>
#include <fmt/format.h>

#include "qie/error.hpp"

namespace qie {

namespace odeint = boost::numeric::odeint;

namespace {

constexpr double kSingularSin = 1e-12;
constexpr double kInteriorFraction = 0.95;

double cot(double x) { return std::cos(x) / std::sin(x); }

// A in  Omega' Delta - Omega Delta' = A - Omega beta_ddot. Expanded from
// Omega = theta_dot csc(beta), Delta = beta_dot - theta_dot cot(theta) cot(beta);
// the theta_dot theta_ddot cross terms cancel and cot^2 - csc^2 = -1.
double constraint_offset(const ThetaSample& th, double beta, double beta_dot) {
  const double csc_b = 1.0 / std::sin(beta);
  const double cot_b = cot(beta);
  const double sin_t = std::sin(th.theta);
  const double cot_t = std::cos(th.theta) / sin_t;
  const double td = th.theta_dot;
  return csc_b * (th.theta_ddot * beta_dot - td * beta_dot * beta_dot * cot_b -
                  td * td * td * cot_b / (sin_t * sin_t) - td * td * beta_dot * cot_t);
}

double solve_acceleration(const ThetaSample& th, double beta, double beta_dot, double c,
                          int branch_sign) {
  const double omega = th.theta_dot / std::sin(beta);
  const double delta = beta_dot - th.theta_dot * cot(th.theta) * cot(beta);
  const double gap = std::hypot(omega, delta);
  const double a = constraint_offset(th, beta, beta_dot);
  return (a - branch_sign * 2.0 * c * gap * gap * gap) / omega;
}

using State = std::array<double, 3>;  // beta, beta_dot, accumulated area

struct AngleDynamics {
  const DesignParams& params;
  double floor;
  double held = 0.0;

  void operator()(const State& y, State& dydt, double t) {
    const ThetaSample th = theta_profile(t, params.T);
    const double omega = th.theta_dot / std::sin(y[0]);
    double accel = held;
    if (std::abs(omega) >= floor) {
      accel = solve_acceleration(th, y[0], y[1], params.c, params.branch_sign);
      if (std::isfinite(accel)) held = accel;
    }
    dydt = {y[1], accel, std::abs(omega)};
  }
};

}  // namespace

const char* to_string(BetaRateInit init) noexcept {
  return init == BetaRateInit::Zero ? "zero" : "consistency";
}

BetaRateInit beta_rate_init_from_string(const std::string& name) {
  if (name == "zero") return BetaRateInit::Zero;
  if (name == "consistency") return BetaRateInit::Consistency;
  throw Error(ErrorKind::Parameter,
              "beta_rate_init must be 'zero' or 'consistency', got '" + name + "'");
}

void DesignParams::validate() const {
  auto require = [](bool ok, const char* field, const std::string& bound) {
    if (!ok) throw Error(ErrorKind::Parameter, fmt::format("{} must be {}", field, bound));
  };
  require(std::isfinite(c) && c > 0.0, "c", "> 0");
  require(std::isfinite(T) && T > 0.0, "T", "> 0");
  require(std::isfinite(kappa) && kappa >= 3.0, "kappa", ">= 3");
  require(n_samples >= 3, "n_samples", ">= 3");
  require(branch_sign == 1 || branch_sign == -1, "branch_sign", "+1 or -1");
  require(beta_rate_sign == 1 || beta_rate_sign == -1, "beta_rate_sign", "+1 or -1");
  require(std::isfinite(ode_rel_tol) && ode_rel_tol > 0.0, "ode_rel_tol", "> 0");
  require(std::isfinite(ode_abs_tol) && ode_abs_tol > 0.0, "ode_abs_tol", "> 0");
  require(std::isfinite(omega_floor) && omega_floor >= 0.0, "omega_floor", ">= 0");
}

RabiDetuning invert_angles(const ThetaSample& th, double beta, double beta_dot) {
  const double sin_b = std::sin(beta);
  if (!(std::abs(sin_b) >= kSingularSin)) {
    throw Error(ErrorKind::Singularity,
                fmt::format("sin(beta) = {:.3e} is singular", sin_b));
  }
  const double cot_b = std::cos(beta) / sin_b;
  RabiDetuning out;
  out.omega = th.theta_dot / sin_b;
  const double sin_t = std::sin(th.theta);
  if (std::abs(sin_t) < kSingularSin) {
    // Regularized start: theta -> 0 only admits cot(beta) -> 0.
    if (std::abs(cot_b) >= kSingularSin) {
      throw Error(ErrorKind::Singularity,
                  fmt::format("theta = {:.3e} with cot(beta) = {:.3e}", th.theta, cot_b));
    }
    out.delta = beta_dot;
    return out;
  }
  out.delta = beta_dot - th.theta_dot * (std::cos(th.theta) / sin_t) * cot_b;
  return out;
}

PulseRates pulse_rates(const ThetaSample& th, double beta, double beta_dot,
                       double beta_ddot) {
  const RabiDetuning od = invert_angles(th, beta, beta_dot);
  const double csc_b = 1.0 / std::sin(beta);
  const double cot_b = std::cos(beta) * csc_b;
  const double csc_t = 1.0 / std::sin(th.theta);
  const double cot_t = std::cos(th.theta) * csc_t;

  PulseRates r;
  r.omega = od.omega;
  r.delta = od.delta;
  // d/dt csc(b) = -csc(b) cot(b) b'
  r.omega_dot = th.theta_ddot * csc_b - th.theta_dot * csc_b * cot_b * beta_dot;
  // d/dt [t' cot(th) cot(b)] = t'' cot cot - t'^2 csc^2(th) cot(b) - t' b' cot(th) csc^2(b)
  const double d_cross = th.theta_ddot * cot_t * cot_b -
                         th.theta_dot * th.theta_dot * csc_t * csc_t * cot_b -
                         th.theta_dot * beta_dot * cot_t * csc_b * csc_b;
  r.delta_dot = beta_ddot - d_cross;
  return r;
}

double adiabaticity_parameter(double omega, double omega_dot, double delta,
                              double delta_dot) {
  const double gap2 = omega * omega + delta * delta;
  if (!(gap2 > 0.0)) {
    throw Error(ErrorKind::Degeneracy, "adiabaticity parameter undefined at Omega = Delta = 0");
  }
  return std::abs(omega_dot * delta - omega * delta_dot) / (2.0 * gap2 * std::sqrt(gap2));
}

double beta_acceleration(const ThetaSample& th, double beta, double beta_dot, double c,
                         int branch_sign, double omega_floor) {
  if (branch_sign != 1 && branch_sign != -1) {
    throw Error(ErrorKind::Parameter, "branch_sign must be +1 or -1");
  }
  const RabiDetuning od = invert_angles(th, beta, beta_dot);
  if (!(std::abs(od.omega) >= omega_floor) || od.omega == 0.0) {
    throw Error(ErrorKind::Stiffness,
                fmt::format("|Omega| = {:.3e} is below the floor {:.3e}", std::abs(od.omega),
                            omega_floor));
  }
  return solve_acceleration(th, beta, beta_dot, c, branch_sign);
}

double initial_beta_rate(const DesignParams& params) {
  params.validate();
  if (params.beta_rate_init == BetaRateInit::Zero) return 0.0;
  // Omega -> 0 limit with Delta ~ beta_dot: the parameter reduces to
  // |Omega'| / (2 beta_dot^2) and Omega' -> theta_ddot at beta = pi/2.
  const ThetaSample th = theta_profile(-params.kappa * params.T, params.T);
  return params.beta_rate_sign * std::sqrt(std::abs(th.theta_ddot) / (2.0 * params.c));
}

DesignResult design_pulse(const DesignParams& params) {
  params.validate();
  const TimeGrid grid = params.grid();
  const std::vector<double> times = grid.samples();
  const std::size_t n = grid.size();

  std::vector<State> states;
  states.reserve(n);
  double last_time = grid.t_start();

  AngleDynamics dynamics{params, params.omega_floor / params.T};
  State y{std::numbers::pi / 2.0, initial_beta_rate(params), 0.0};
  auto stepper = odeint::make_dense_output(params.ode_abs_tol, params.ode_rel_tol,
                                           odeint::runge_kutta_dopri5<State>());
  try {
    odeint::integrate_times(
        stepper, std::ref(dynamics), y, times.begin(), times.end(), grid.step() * 1e-3,
        [&](const State& s, double t) {
          if (!std::isfinite(s[0]) || !std::isfinite(s[1]) || !std::isfinite(s[2])) {
            throw DesignFailure(ErrorKind::Singularity, t,
                                fmt::format("angle dynamics diverged at t = {:.6g}", t));
          }
          states.push_back(s);
          last_time = t;
        },
        odeint::max_step_checker(2'000'000));
  } catch (const DesignFailure&) {
    throw;
  } catch (const std::runtime_error& e) {
    throw DesignFailure(ErrorKind::Tolerance, last_time,
                        fmt::format("adaptive stepper failed after t = {:.6g}: {}",
                                    last_time, e.what()));
  }
  if (states.size() != n) {
    throw DesignFailure(ErrorKind::Tolerance, last_time, "integration ended early");
  }

  AngleTrajectory angles{grid, theta_profile(grid, params.T), {}, {}, {}, {}};
  angles.beta.resize(n);
  angles.beta_dot.resize(n);
  angles.beta_ddot.resize(n);
  angles.adiabaticity.resize(n);

  Pulse pulse{grid, std::vector<double>(n), std::vector<double>(n), 0.0, {}, {}, {}};
  const double floor = params.omega_floor / params.T;
  const double sign0 = std::sin(states.front()[0]) >= 0.0 ? 1.0 : -1.0;
  double residual = 0.0;

  for (std::size_t i = 0; i < n; ++i) {
    const double t = grid[i];
    const ThetaSample& th = angles.theta[i];
    const double beta = states[i][0];
    const double beta_dot = states[i][1];
    // The invariant phase may not pass through a zero of sin(beta): Omega
    // would change sign through a pole.
    if (std::sin(beta) * sign0 < kSingularSin) {
      throw DesignFailure(ErrorKind::Singularity, t,
                          fmt::format("sin(beta) reached zero near t = {:.6g}", t));
    }
    RabiDetuning od;
    try {
      od = invert_angles(th, beta, beta_dot);
    } catch (const Error& e) {
      throw DesignFailure(e.kind(), t, fmt::format("at t = {:.6g}: {}", t, e.what()));
    }
    double accel = std::numeric_limits<double>::quiet_NaN();
    double param = std::numeric_limits<double>::quiet_NaN();
    if (std::abs(od.omega) >= floor && od.omega != 0.0) {
      accel = solve_acceleration(th, beta, beta_dot, params.c, params.branch_sign);
      param = adiabaticity_parameter(pulse_rates(th, beta, beta_dot, accel));
      if (grid.in_interior(t, kInteriorFraction)) {
        residual = std::max(residual, std::abs(param - params.c));
      }
    } else if (grid.in_interior(t, kInteriorFraction)) {
      throw DesignFailure(ErrorKind::Stiffness, t,
                          fmt::format("|Omega| fell below the floor inside the window at t = {:.6g}", t));
    }
    angles.beta[i] = beta;
    angles.beta_dot[i] = beta_dot;
    angles.beta_ddot[i] = accel;
    angles.adiabaticity[i] = param;
    pulse.omega[i] = od.omega;
    pulse.delta[i] = od.delta;
  }

  // The area is accumulated by the adaptive integrator rather than by grid
  // quadrature: where beta grazes zero, Omega ~ |t - t0|^{-1/2} is integrable
  // but far too narrow for the uniform grid to resolve.
  pulse.area = states.back()[2];
  pulse.beta_final = states.back()[0];
  pulse.adiabaticity_residual = residual;
  pulse.design = DesignMetadata{params.c,           params.T,
                                params.kappa,       params.branch_sign,
                                params.beta_rate_init, params.beta_rate_sign};
  return DesignResult{std::move(pulse), std::move(angles)};
}

double simpson(std::span<const double> v, double h) {
  const std::size_t n = v.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * h * (v[0] + v[1]);
  const std::size_t intervals = n - 1;
  std::size_t even_end = intervals % 2 == 0 ? intervals : intervals - 3;
  double sum = 0.0;
  if (even_end > 0) {
    double s = v[0] + v[even_end];
    for (std::size_t i = 1; i < even_end; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * v[i];
    sum += s * h / 3.0;
  }
  if (even_end != intervals) {
    const std::size_t k = even_end;
    sum += 3.0 * h / 8.0 * (v[k] + 3.0 * v[k + 1] + 3.0 * v[k + 2] + v[k + 3]);
  }
  return sum;
}

double pulse_area(const Pulse& pulse) {
  std::vector<double> mag(pulse.omega.size());
  for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::abs(pulse.omega[i]);
  return simpson(mag, pulse.grid.step());
}

}  // namespace qie
