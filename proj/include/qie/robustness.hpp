#pragma once

#include <span>
#include <string>
#include <vector>

#include "qie/designer.hpp"
#include "qie/dynamics.hpp"

namespace qie {

enum class ErrorParameter { Rabi, Detuning };

const char* to_string(ErrorParameter p) noexcept;
ErrorParameter error_parameter_from_string(const std::string& name);

// Uniform grid of relative error amplitudes. lo == hi with a single point is
// accepted as the nominal-only scan.
struct ErrorGrid {
  ErrorParameter parameter = ErrorParameter::Rabi;
  double lo = -0.5;
  double hi = 0.5;
  std::size_t n_points = 101;

  void validate() const;
  /// Grid values in increasing order; contains an exact 0 whenever lo <= 0 <= hi.
  std::vector<double> values() const;

  friend bool operator==(const ErrorGrid&, const ErrorGrid&) = default;
};

struct ScanResult {
  std::string protocol_label;
  ErrorGrid grid;
  std::vector<double> deltas;
  std::vector<double> fidelities;
  double min_fidelity_in_band = 0.0;  // over |delta| <= 0.2
  double area = 0.0;

  double band_min(double half_width) const;
  /// Fidelity at delta = 0; NaN when the grid does not span zero.
  double nominal_fidelity() const;
};

/// Resonant constant-amplitude pulse of area pi/2 over [0, duration].
Pulse pi_half_baseline(double duration, std::size_t n_samples = 4001);

ErrorModel error_model(ErrorParameter parameter, double delta);

/// Fidelity against a fixed target for every delta on the grid. Points run
/// concurrently on `threads` workers (0 = hardware concurrency); results are
/// stored by grid index, so they do not depend on the schedule.
ScanResult scan_1d(const Pulse& pulse, const TargetState& target, const ErrorGrid& grid,
                   std::string label = "pulse", unsigned threads = 0);

struct SummaryRow {
  std::string label;
  ErrorParameter parameter = ErrorParameter::Rabi;
  double area = 0.0;
  double nominal_fidelity = 0.0;
  double band_min_01 = 0.0;
  double band_min_02 = 0.0;
  double band_min_03 = 0.0;
  bool monotone_negative = false;  // fidelity rises toward 0 for delta < 0
  bool monotone_positive = false;  // fidelity falls away from 0 for delta > 0
};

struct RobustnessSummary {
  std::vector<SummaryRow> rows;
  std::string to_text() const;
};

RobustnessSummary robustness_summary(std::span<const ScanResult> results);

}  // namespace qie
