#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace qie {

enum class ErrorKind {
  Parameter,    // invalid argument or out-of-range field
  Singularity,  // sin(beta) or theta at a singular point
  Stiffness,    // |Omega| below the floor in the angle dynamics
  Degeneracy,   // Omega = Delta = 0 where an eigenbasis is needed
  Tolerance,    // adaptive stepper failed to make progress
  Design,       // design run failed at a specific time
  Parse,        // malformed config or CSV content
  Grid,         // non-uniform or inconsistent time axis
  Io,           // filesystem failure
  Scan,         // scan failed at a specific error value
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by design_pulse; carries the time at which the integration broke down.
class DesignFailure : public Error {
 public:
  DesignFailure(ErrorKind cause, double time, const std::string& message)
      : Error(ErrorKind::Design, message), cause_(cause), time_(time) {}

  ErrorKind cause() const noexcept { return cause_; }
  double time() const noexcept { return time_; }

 private:
  ErrorKind cause_;
  double time_;
};

/// Raised by scan_1d; names the error amplitude at which propagation failed.
class ScanFailure : public Error {
 public:
  ScanFailure(double delta, const std::string& message)
      : Error(ErrorKind::Scan, message), delta_(delta) {}

  double delta() const noexcept { return delta_; }

 private:
  double delta_;
};

}  // namespace qie
