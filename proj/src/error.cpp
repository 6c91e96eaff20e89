#include "qie/error.hpp"

namespace qie {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Parameter: return "parameter";
    case ErrorKind::Singularity: return "singularity";
    case ErrorKind::Stiffness: return "stiffness";
    case ErrorKind::Degeneracy: return "degeneracy";
    case ErrorKind::Tolerance: return "tolerance";
    case ErrorKind::Design: return "design";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Grid: return "grid";
    case ErrorKind::Io: return "io";
    case ErrorKind::Scan: return "scan";
  }
  return "unknown";
}

}  // namespace qie
