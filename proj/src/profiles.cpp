#include "qie/profiles.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qie/error.hpp"

namespace qie {

TimeGrid::TimeGrid(double t_start, double t_end, std::size_t n_samples)
    : t_start_(t_start), t_end_(t_end), n_(n_samples), step_(0.0) {
  if (!std::isfinite(t_start) || !std::isfinite(t_end) || !(t_start < t_end)) {
    throw Error(ErrorKind::Grid, "time grid requires finite t_start < t_end");
  }
  if (n_samples < 3) {
    throw Error(ErrorKind::Grid, "time grid requires at least 3 samples, got " +
                                     std::to_string(n_samples));
  }
  step_ = (t_end - t_start) / static_cast<double>(n_samples - 1);
}

std::vector<double> TimeGrid::samples() const {
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = at(i);
  return out;
}

bool TimeGrid::in_interior(double t, double fraction) const noexcept {
  const double mid = 0.5 * (t_start_ + t_end_);
  const double half = 0.5 * fraction * (t_end_ - t_start_);
  return std::abs(t - mid) <= half;
}

ThetaSample theta_profile(double t, double T) {
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw Error(ErrorKind::Parameter, "characteristic time T must be positive");
  }
  using std::numbers::pi;
  const double x = t / T;
  ThetaSample s;
  s.theta = 0.25 * pi * std::erfc(-x);
  s.theta_dot = std::sqrt(pi) / (2.0 * T) * std::exp(-x * x);
  s.theta_ddot = s.theta_dot * (-2.0 * t / (T * T));
  return s;
}

std::vector<ThetaSample> theta_profile(const TimeGrid& grid, double T) {
  std::vector<ThetaSample> out;
  out.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out.push_back(theta_profile(grid[i], T));
  return out;
}

}  // namespace qie
