#pragma once

#include <cstddef>
#include <vector>

namespace qie {

/// Uniform sampling of a closed time window [t_start, t_end].
class TimeGrid {
 public:
  TimeGrid(double t_start, double t_end, std::size_t n_samples);

  double t_start() const noexcept { return t_start_; }
  double t_end() const noexcept { return t_end_; }
  std::size_t size() const noexcept { return n_; }
  double step() const noexcept { return step_; }

  // The last sample is pinned to t_end so the window closes exactly.
  double at(std::size_t i) const noexcept {
    return i + 1 == n_ ? t_end_ : t_start_ + static_cast<double>(i) * step_;
  }
  double operator[](std::size_t i) const noexcept { return at(i); }

  std::vector<double> samples() const;

  /// True when t lies in the central `fraction` of the window.
  bool in_interior(double t, double fraction) const noexcept;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  double t_start_;
  double t_end_;
  std::size_t n_;
  double step_;
};

struct ThetaSample {
  double theta = 0.0;
  double theta_dot = 0.0;
  double theta_ddot = 0.0;
};

// theta(t) = (pi/4) [erf(t/T) + 1], written through erfc so the tails keep
// full relative precision (theta ~ 1e-8 at t = -4T).
ThetaSample theta_profile(double t, double T);

std::vector<ThetaSample> theta_profile(const TimeGrid& grid, double T);

}  // namespace qie
