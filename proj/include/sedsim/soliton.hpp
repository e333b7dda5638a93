#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sedsim/polynomial.hpp"

namespace sedsim::soliton {

// Factor (1 - xi alpha) by which the curl grows at transverse offset xi when the
// filament axis turns by alpha per unit arc. Valid for |xi alpha| < 1.
double curl_correction(double xi_m, double alpha);

struct FilamentProfile {
  double period_m;            // translation period Lambda along the filament
  double evanescent_radius_m; // rho
  double critical_flux_w;

  FilamentProfile(double period, double evanescent_radius, double critical_flux = 1.0);
};

// Wave-surface rotation beta as a function of tangent rotation alpha, either as
// a polynomial with zero constant term or as a table with linear interpolation.
class RotationResponse {
 public:
  static RotationResponse polynomial(std::vector<double> coefficients);
  static RotationResponse tabulated(std::vector<double> alpha, std::vector<double> beta);

  double beta(double alpha) const;
  // f(alpha) = beta(alpha) / alpha. Exact polynomial division for polynomial
  // responses.
  double ratio(double alpha) const;
  // df/dalpha: exact for polynomials; central difference with step
  // 1e-6 * max(1, |alpha|) (one-sided at table ends) for tables.
  double ratio_slope(double alpha) const;

  bool is_tabulated() const { return !table_alpha_.empty(); }
  double table_min() const;
  double table_max() const;

 private:
  RotationResponse() = default;

  Polynomial beta_poly_;
  Polynomial ratio_poly_;
  Polynomial ratio_slope_poly_;
  std::vector<double> table_alpha_;
  std::vector<double> table_beta_;
};

// Fixtures: beta = 2 alpha - alpha^2 (stable root at 1), beta = alpha / 2 (no
// root), beta = alpha^2 (unstable root at 1).
RotationResponse stable_fixture();
RotationResponse no_root_fixture();
RotationResponse unstable_fixture();

struct SearchOptions {
  double alpha_min = 1e-3;
  double alpha_max = 10.0;
  double tol = 1e-12;         // on |f - 1|
  std::size_t scan_cells = 1000;
};

struct StableRoot {
  double alpha0;
  double residual;        // |f(alpha0) - 1|
  double slope;           // df/dalpha at alpha0, < 0
  std::vector<double> all_roots;
};

// Scans [alpha_min, alpha_max] in scan_cells equal cells for sign changes of
// f - 1, refines each bracket by bisection with secant steps, and returns the
// smallest root with df/dalpha < 0. Throws NoSolution when no root exists and
// UnstableOnly (listing the roots) when none is stable. The interval must stay
// clear of alpha = 0 (|alpha| >= 1e-9).
StableRoot find_stable_alpha(const RotationResponse& response, const SearchOptions& options = {});

struct TorusCandidate {
  double radius_m;
  int winding;
  double alpha0;
};

// R_k = k Lambda / (2 pi) for k = 1..k_max, keeping R_k > rho.
std::vector<TorusCandidate> quantized_radii(const FilamentProfile& profile, int k_max,
                                            double alpha0 = 0.0);

// Admissible candidate closest to target_radius.
TorusCandidate nearest_quantized_radius(const FilamentProfile& profile, double target_radius,
                                        double alpha0 = 0.0);

// CSV: alpha_rad,beta_rad
RotationResponse read_response_csv(std::istream& in);
std::string candidates_csv(const std::vector<TorusCandidate>& candidates);

}  // namespace sedsim::soliton
