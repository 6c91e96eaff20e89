#pragma once

#include <string>
#include <vector>

#include "qie/designer.hpp"
#include "qie/robustness.hpp"

namespace qie {

struct RunConfig {
  DesignParams design;
  std::vector<double> c_values{0.073, 0.060, 0.050, 0.040};
  ErrorGrid rabi_scan{ErrorParameter::Rabi, -0.5, 0.5, 101};
  ErrorGrid detuning_scan{ErrorParameter::Detuning, -0.5, 0.5, 101};
  int substeps = 2;
  std::string output_dir = "qie_out";
  bool emit_plots = false;
  int csv_precision = 12;

  void validate() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Default output directory: $QIE_OUTPUT_DIR when set, else "qie_out".
std::string default_output_dir();

// JSON object model. Missing keys take defaults; unknown keys and
// out-of-range values are errors naming the offending fields.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& config);

}  // namespace qie
