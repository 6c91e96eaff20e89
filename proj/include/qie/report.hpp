#pragma once

#include <array>
#include <string>
#include <vector>

#include "qie/config.hpp"
#include "qie/robustness.hpp"

namespace qie {

struct ReferenceRow {
  double c;
  double beta_final_over_pi;
  double area_over_pi;
};

/// Reference design table: (c, beta(t_f)/pi, area/pi).
inline constexpr std::array<ReferenceRow, 4> kReferenceTable{{
    {0.073, 0.051, 1.970},
    {0.060, 0.034, 2.470},
    {0.050, 0.033, 3.076},
    {0.040, 0.023, 3.839},
}};

inline constexpr double kAreaRelTolerance = 0.02;
inline constexpr double kBetaFinalTolerance = 0.01;  // in units of pi

struct DesignReport {
  double c = 0.0;
  double area = 0.0;
  double beta_final = 0.0;
  double adiabaticity_residual = 0.0;
  double nominal_fidelity = 0.0;
  double max_abs_v = 0.0;
  double min_followed_population = 0.0;  // over the interior 95% of the window
  bool has_reference = false;
  ReferenceRow reference{};
  bool area_ok = false;
  bool beta_final_ok = false;
};

struct ReportResult {
  std::vector<DesignReport> designs;
  std::vector<ScanResult> scans;  // rabi/detuning per design, then the baseline pair
  RobustnessSummary robustness;
  std::string summary_text;
  std::vector<std::string> files;  // every file written, relative to output_dir
};

/// Reference row whose c matches within 1e-9, or nullptr.
const ReferenceRow* find_reference(double c);

// Designs every c value, writes pulse, scan, trajectory and summary files
// under config.output_dir, and returns the computed figures.
ReportResult run_report(const RunConfig& config);

}  // namespace qie
