#include "sedsim/error.hpp"

namespace sedsim {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "InvalidArgument";
    case ErrorKind::invalid_grid: return "InvalidGrid";
    case ErrorKind::not_normalizable: return "NotNormalizable";
    case ErrorKind::grid_mismatch: return "GridMismatch";
    case ErrorKind::invalid_amplitude: return "InvalidAmplitude";
    case ErrorKind::frame_not_found: return "FrameNotFound";
    case ErrorKind::undefined_visibility: return "UndefinedVisibility";
    case ErrorKind::invalid_calibration: return "InvalidCalibration";
    case ErrorKind::out_of_validity_region: return "OutOfValidityRegion";
    case ErrorKind::no_solution: return "NoSolution";
    case ErrorKind::unstable_only: return "UnstableOnly";
    case ErrorKind::parse_error: return "ParseError";
  }
  return "Unknown";
}

}  // namespace sedsim
