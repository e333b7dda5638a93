#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sedsim::ilcrs {

struct PulseModel {
  double pulse_length_s;
  double collision_time_s;
  double raman_frequency_hz;
  double intensity_w_per_m2;

  PulseModel(double pulse_length, double collision_time, double raman_frequency,
             double intensity = 1.0);
};

struct UltrashortReport {
  bool collision_ok;
  bool beat_ok;
  bool overall;
};

// Coherent scattering requires the pulse to be shorter than both the mean time
// between collisions and the Raman beat period 1/f_R, each by the given margin
// (strict inequality at margin 1).
UltrashortReport ultrashort_check(const PulseModel& pulse, double margin = 1.0);

// Per-molecule coefficient kappa in d(ln nu) = -kappa n dl, plus an optional
// log-frequency dispersion slope about a reference frequency.
struct ShiftCoefficient {
  double kappa_m2;
  double dispersion = 0.0;
  double reference_frequency_hz = kDefaultReferenceFrequency;

  static constexpr double kDefaultReferenceFrequency = 299792458.0 / 550e-9;  // 550 nm

  explicit ShiftCoefficient(double kappa, double dispersion_slope = 0.0,
                            double reference_frequency = kDefaultReferenceFrequency);
};

// kappa = reference_rate / reference_density. The rate is the relative shift per
// metre the density should produce (e.g. H0/c); there is no built-in value.
ShiftCoefficient calibrate_kappa(double reference_density_per_m3, double reference_rate_per_m);

enum class Interpolation { piecewise_constant, piecewise_linear };

class Sightline {
 public:
  Sightline(std::vector<double> position_m, std::vector<double> density_per_m3,
            Interpolation interpolation = Interpolation::piecewise_linear);

  static Sightline uniform(double density_per_m3, double length_m);

  const std::vector<double>& position() const { return position_; }
  const std::vector<double>& density() const { return density_; }
  Interpolation interpolation() const { return interpolation_; }
  double length() const { return position_.back() - position_.front(); }

  // Exact integral of the interpolated density. Piecewise-constant segments use
  // the left sample.
  double column_density() const;

  // Path split at sample index k: [0, k] and [k, end].
  std::pair<Sightline, Sightline> split_at(std::size_t k) const;
  // Joins two paths; other's positions are shifted to start where this ends.
  Sightline concatenate(const Sightline& other) const;

 private:
  std::vector<double> position_;
  std::vector<double> density_;
  Interpolation interpolation_;
};

// z = exp(kappa * column density) - 1.
double redshift_along(const Sightline& sightline, const ShiftCoefficient& coeff);

// Relative shift per metre implied by a sightline: ln(1 + z) / length.
double effective_rate(const Sightline& sightline, const ShiftCoefficient& coeff);

struct SpectralLine {
  double wavelength_nm;
  double amplitude;
};

using Spectrum = std::vector<SpectralLine>;

// Frequency multiplier 1 / (1 + z (1 + D log10(nu / nu_ref))).
double frequency_multiplier(double frequency_hz, double z, const ShiftCoefficient& coeff);

// Shifts every line by its frequency multiplier; amplitudes and line count are
// untouched.
Spectrum apply_redshift(const Spectrum& spectrum, double z, const ShiftCoefficient& coeff);

// Relative frequency shift (nu - nu') / nu of a line.
double relative_shift(double frequency_hz, double z, const ShiftCoefficient& coeff);

// Shift proportional to intensity, as in the stimulated (high-power) regime.
double stimulated_shift(double intensity_w_per_m2, double proportionality);

struct DopplerDeviation {
  double wavelength_nm;
  double ilcrs_relative_shift;
  double doppler_relative_shift;
  double deviation;  // |ilcrs - doppler|
};

struct DopplerComparison {
  std::vector<DopplerDeviation> lines;
  double max_deviation = 0.0;
};

// Per-line comparison against the Doppler law nu' = nu / (1 + z).
DopplerComparison compare_to_doppler(const Spectrum& spectrum, double z,
                                     const ShiftCoefficient& coeff);

// CSV: position_m,density_per_m3
Sightline read_sightline_csv(std::istream& in,
                             Interpolation interpolation = Interpolation::piecewise_linear);
// CSV: wavelength_nm,amplitude
Spectrum read_spectrum_csv(std::istream& in);
std::string spectrum_csv(const Spectrum& spectrum);
std::string doppler_csv(const DopplerComparison& comparison);

}  // namespace sedsim::ilcrs
