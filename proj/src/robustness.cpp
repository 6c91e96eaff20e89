#include "qie/robustness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <optional>
#include <thread>

#include <fmt/format.h>

#include "qie/error.hpp"

namespace qie {

namespace {

constexpr double kBandTolerance = 1e-12;
constexpr double kMonotoneSlack = 1e-12;

}  // namespace

const char* to_string(ErrorParameter p) noexcept {
  return p == ErrorParameter::Rabi ? "rabi" : "detuning";
}

ErrorParameter error_parameter_from_string(const std::string& name) {
  if (name == "rabi") return ErrorParameter::Rabi;
  if (name == "detuning") return ErrorParameter::Detuning;
  throw Error(ErrorKind::Parameter, "error parameter must be 'rabi' or 'detuning', got '" +
                                        name + "'");
}

void ErrorGrid::validate() const {
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorKind::Parameter, "error grid bounds must be finite");
  }
  if (lo == hi && n_points == 1) return;
  if (!(lo < hi)) throw Error(ErrorKind::Parameter, "error grid requires lo < hi");
  if (n_points < 2) throw Error(ErrorKind::Parameter, "error grid requires n_points >= 2");
}

std::vector<double> ErrorGrid::values() const {
  validate();
  if (n_points == 1) return {lo};
  std::vector<double> out(n_points);
  const double span = hi - lo;
  for (std::size_t i = 0; i < n_points; ++i) {
    double v = i + 1 == n_points ? hi : lo + span * static_cast<double>(i) / (n_points - 1);
    if (std::abs(v) < 1e-12 * span) v = 0.0;
    out[i] = v;
  }
  if (lo <= 0.0 && 0.0 <= hi && std::find(out.begin(), out.end(), 0.0) == out.end()) {
    out.insert(std::upper_bound(out.begin(), out.end(), 0.0), 0.0);
  }
  return out;
}

double ScanResult::band_min(double half_width) const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (std::abs(deltas[i]) <= half_width + kBandTolerance) m = std::min(m, fidelities[i]);
  }
  return std::isfinite(m) ? m : std::numeric_limits<double>::quiet_NaN();
}

double ScanResult::nominal_fidelity() const {
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (deltas[i] == 0.0) return fidelities[i];
  }
  return std::numeric_limits<double>::quiet_NaN();
}

Pulse pi_half_baseline(double duration, std::size_t n_samples) {
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw Error(ErrorKind::Parameter, "baseline duration must be positive");
  }
  const TimeGrid grid(0.0, duration, n_samples);
  Pulse p{grid, std::vector<double>(n_samples, 0.5 * std::numbers::pi / duration),
          std::vector<double>(n_samples, 0.0), 0.5 * std::numbers::pi, {}, {}, {}};
  // A resonant pulse keeps the invariant phase at pi/2 throughout.
  p.beta_final = 0.5 * std::numbers::pi;
  return p;
}

ErrorModel error_model(ErrorParameter parameter, double delta) {
  return parameter == ErrorParameter::Rabi ? ErrorModel{delta, 0.0} : ErrorModel{0.0, delta};
}

ScanResult scan_1d(const Pulse& pulse, const TargetState& target, const ErrorGrid& grid,
                   std::string label, unsigned threads) {
  const std::vector<double> deltas = grid.values();
  std::vector<double> fid(deltas.size(), std::numeric_limits<double>::quiet_NaN());
  std::vector<std::optional<std::string>> failures(deltas.size());
  const QuantumState goal = target_state(target);

  auto evaluate = [&](std::size_t i) {
    try {
      const QuantumState out =
          propagate_final(pulse, QuantumState::ground(), error_model(grid.parameter, deltas[i]));
      const double f = fidelity(out, goal);
      if (!std::isfinite(f)) throw Error(ErrorKind::Parameter, "non-finite fidelity");
      fid[i] = f;
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, deltas.size()));
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < deltas.size(); i = next++) evaluate(i);
      });
    }
  }
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (failures[i]) {
      throw ScanFailure(deltas[i], fmt::format("scan '{}' failed at {} error {}: {}", label,
                                               to_string(grid.parameter), deltas[i],
                                               *failures[i]));
    }
  }

  ScanResult r{std::move(label), grid, deltas, std::move(fid), 0.0, pulse.area};
  r.min_fidelity_in_band = r.band_min(0.2);
  return r;
}

RobustnessSummary robustness_summary(std::span<const ScanResult> results) {
  if (results.empty()) throw Error(ErrorKind::Parameter, "robustness summary needs at least one scan");
  RobustnessSummary s;
  for (const ScanResult& r : results) {
    SummaryRow row;
    row.label = r.protocol_label;
    row.parameter = r.grid.parameter;
    row.area = r.area;
    row.nominal_fidelity = r.nominal_fidelity();
    row.band_min_01 = r.band_min(0.1);
    row.band_min_02 = r.band_min(0.2);
    row.band_min_03 = r.band_min(0.3);
    row.monotone_negative = true;
    row.monotone_positive = true;
    for (std::size_t i = 0; i + 1 < r.deltas.size(); ++i) {
      const double a = r.fidelities[i];
      const double b = r.fidelities[i + 1];
      if (r.deltas[i + 1] <= 0.0 && b + kMonotoneSlack < a) row.monotone_negative = false;
      if (r.deltas[i] >= 0.0 && b > a + kMonotoneSlack) row.monotone_positive = false;
    }
    s.rows.push_back(row);
  }
  return s;
}

std::string RobustnessSummary::to_text() const {
  std::string out = fmt::format("{:<24} {:<9} {:>10} {:>12} {:>12} {:>12} {:>12} {:>5}\n",
                                "protocol", "error", "area/pi", "F(0)", "min|d|<=0.1",
                                "min|d|<=0.2", "min|d|<=0.3", "mono");
  for (const SummaryRow& r : rows) {
    out += fmt::format("{:<24} {:<9} {:>10.4f} {:>12.8f} {:>12.8f} {:>12.8f} {:>12.8f} {:>5}\n",
                       r.label, to_string(r.parameter), r.area / std::numbers::pi,
                       r.nominal_fidelity, r.band_min_01, r.band_min_02, r.band_min_03,
                       (r.monotone_negative && r.monotone_positive) ? "yes" : "no");
  }
  return out;
}

}  // namespace qie
