#pragma once

#include <map>
#include <string>
#include <vector>

#include "qie/designer.hpp"
#include "qie/dynamics.hpp"
#include "qie/robustness.hpp"

namespace qie {

inline constexpr const char* kToolVersion = "0.1.0";

// Pulse CSV: `#key=value` metadata lines, then the header
// `t,omega,delta,theta,beta,adiabaticity` (or `t,omega,delta` when no angle
// trajectory is available), one row per sample. Angles in radians.
void write_pulse_csv(const Pulse& pulse, const AngleTrajectory* angles,
                     const std::string& path, int precision = 12);

/// Accepts any column order containing t, omega and delta; other columns are ignored.
Pulse read_pulse_csv(const std::string& path);

struct TrajectoryMetadata {
  ErrorModel error;
  std::string pulse_source;
  double fidelity = 0.0;  // NaN when no target is known
};

// Header `t,pop1,pop2,u,v,w,p_minus,p_plus`.
void write_trajectory_csv(const StateTrajectory& trajectory, const TrajectoryMetadata& meta,
                          const std::string& path, int precision = 12);

// Header `delta,fidelity`.
void write_scan_csv(const ScanResult& result, const std::string& path, int precision = 12);

struct CsvTable {
  std::map<std::string, std::string> metadata;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;  // throws Parse when absent
};

/// Generic reader for the CSV dialect above; errors carry the line number.
CsvTable read_csv_table(const std::string& path);

std::string format_number(double value, int precision);

}  // namespace qie
