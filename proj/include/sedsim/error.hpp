#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sedsim {

enum class ErrorKind {
  invalid_argument,
  invalid_grid,
  not_normalizable,
  grid_mismatch,
  invalid_amplitude,
  frame_not_found,
  undefined_visibility,
  invalid_calibration,
  out_of_validity_region,
  no_solution,
  unstable_only,
  parse_error,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries one of the kinds above; the CLI
// maps them onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace sedsim
