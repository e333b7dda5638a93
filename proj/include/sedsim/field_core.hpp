#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sedsim/random.hpp"

namespace sedsim::field {

// Tabulated spectral energy density w(nu) on a strictly increasing grid of
// positive frequencies. All integrals use the trapezoid rule on this grid.
class SpectralMode {
 public:
  SpectralMode(std::vector<double> frequency_hz, std::vector<double> density_j_per_hz,
               bool normalized = false);

  const std::vector<double>& frequency() const { return frequency_; }
  const std::vector<double>& density() const { return density_; }
  bool normalized() const { return normalized_; }
  std::size_t size() const { return frequency_.size(); }

  // Trapezoid estimate of the integral of w(nu)/nu. Equals h for a normalized
  // mode.
  double action_integral() const;

 private:
  std::vector<double> frequency_;
  std::vector<double> density_;
  bool normalized_;
};

struct NormalizedMode {
  SpectralMode mode;
  double scale;
};

// Rescales w so that the trapezoid integral of w(nu)/nu equals h.
NormalizedMode normalize_mode(const SpectralMode& mode);

// Total energy: trapezoid integral of w(nu) dnu.
double mode_energy(const SpectralMode& mode);

// Mode with a spectral phase per grid point. The complex spectral amplitude is
// sqrt(w) * exp(i phase), so superposed densities pick up the cross term
// 2 sqrt(w_a w_b) cos(phase_a - phase_b).
struct PhasedMode {
  SpectralMode mode;
  std::vector<double> phase;

  // Zero phase everywhere.
  explicit PhasedMode(SpectralMode m);
  PhasedMode(SpectralMode m, std::vector<double> phase_rad);
};

enum class GridPolicy {
  require_identical,  // mismatched grids raise GridMismatch
  union_linear,       // resample both onto the merged grid (see superpose)
};

// Coherent superposition. Under union_linear, the real and imaginary parts of
// each complex amplitude are interpolated linearly onto the sorted union of
// both grids; outside a mode's own grid its amplitude is zero.
PhasedMode superpose(const PhasedMode& a, const PhasedMode& b,
                     GridPolicy policy = GridPolicy::require_identical);

bool is_orthogonal(const PhasedMode& a, const PhasedMode& b, double tol,
                   GridPolicy policy = GridPolicy::require_identical);

struct ThermalState {
  double temperature_k;

  explicit ThermalState(double t);
};

// Mean thermal energy h nu / (exp(h nu / kT) - 1). Returns 0 at T = 0 and
// whenever h nu / kT > 700.
double planck_mean_energy(double nu_hz, ThermalState state);

// planck_mean_energy + h nu / 2.
double planck_mean_energy_with_zero_point(double nu_hz, ThermalState state);

// A field sample E = beta * E0 with phase. Amplitudes are in normalized units
// where the mean square of the zero-point baseline at nu is h nu / 2 (joules).
struct FieldAmplitude {
  double baseline_e0;
  double amplification_beta;
  double phase_rad;

  double amplitude() const { return amplification_beta * baseline_e0; }
  double energy() const { return amplitude() * amplitude(); }
};

// Zero-point baseline sample: circular-Gaussian complex amplitude with two
// independent normal quadratures of variance h nu / 4 each, so that the
// ensemble mean of |E0|^2 is h nu / 2. beta is 1.
FieldAmplitude sample_stochastic_amplitude(SplitMix64& gen, double nu_hz);

// Two-column CSV (frequency_hz, density_j_per_hz) with header.
void write_mode_csv(std::ostream& out, const SpectralMode& mode);
std::string mode_csv(const SpectralMode& mode);
SpectralMode read_mode_csv(std::istream& in);

}  // namespace sedsim::field
