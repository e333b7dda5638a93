#include "sedsim/ilcrs.hpp"

#include <algorithm>
#include <cmath>
#include <istream>

#include "sedsim/constants.hpp"
#include "sedsim/csv.hpp"
#include "sedsim/error.hpp"
#include "sedsim/summation.hpp"

namespace sedsim::ilcrs {

namespace {

bool positive(double x) { return x > 0.0 && std::isfinite(x); }

double frequency_of(double wavelength_nm) {
  return constants::speed_of_light / (wavelength_nm * 1e-9);
}

}  // namespace

PulseModel::PulseModel(double pulse_length, double collision_time, double raman_frequency,
                       double intensity)
    : pulse_length_s(pulse_length),
      collision_time_s(collision_time),
      raman_frequency_hz(raman_frequency),
      intensity_w_per_m2(intensity) {
  if (!positive(pulse_length) || !positive(collision_time) || !positive(raman_frequency) ||
      !positive(intensity)) {
    throw Error(ErrorKind::invalid_argument,
                "pulse length, collision time, Raman frequency and intensity must be > 0");
  }
}

UltrashortReport ultrashort_check(const PulseModel& pulse, double margin) {
  if (!positive(margin)) throw Error(ErrorKind::invalid_argument, "margin must be > 0");
  const double needed = margin * pulse.pulse_length_s;
  const bool collision_ok = pulse.collision_time_s > needed;
  const bool beat_ok = 1.0 / pulse.raman_frequency_hz > needed;
  return {collision_ok, beat_ok, collision_ok && beat_ok};
}

ShiftCoefficient::ShiftCoefficient(double kappa, double dispersion_slope,
                                   double reference_frequency)
    : kappa_m2(kappa), dispersion(dispersion_slope), reference_frequency_hz(reference_frequency) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw Error(ErrorKind::invalid_argument, "kappa must be >= 0");
  }
  if (!std::isfinite(dispersion_slope)) {
    throw Error(ErrorKind::invalid_argument, "dispersion must be finite");
  }
  if (!positive(reference_frequency)) {
    throw Error(ErrorKind::invalid_argument, "reference frequency must be > 0");
  }
}

ShiftCoefficient calibrate_kappa(double reference_density_per_m3, double reference_rate_per_m) {
  if (!positive(reference_density_per_m3) || !positive(reference_rate_per_m)) {
    throw Error(ErrorKind::invalid_calibration, "reference density and rate must both be > 0");
  }
  return ShiftCoefficient(reference_rate_per_m / reference_density_per_m3);
}

Sightline::Sightline(std::vector<double> position_m, std::vector<double> density_per_m3,
                     Interpolation interpolation)
    : position_(std::move(position_m)),
      density_(std::move(density_per_m3)),
      interpolation_(interpolation) {
  if (position_.size() != density_.size() || position_.size() < 2) {
    throw Error(ErrorKind::invalid_argument,
                "sightline needs at least 2 samples with matching lengths");
  }
  for (std::size_t i = 0; i < position_.size(); ++i) {
    if (!std::isfinite(position_[i]) || (i > 0 && !(position_[i] > position_[i - 1]))) {
      throw Error(ErrorKind::invalid_argument, "positions must be strictly increasing");
    }
    if (!(density_[i] >= 0.0) || !std::isfinite(density_[i])) {
      throw Error(ErrorKind::invalid_argument, "densities must be >= 0");
    }
  }
}

Sightline Sightline::uniform(double density_per_m3, double length_m) {
  if (!positive(length_m)) throw Error(ErrorKind::invalid_argument, "length must be > 0");
  return Sightline({0.0, length_m}, {density_per_m3, density_per_m3});
}

double Sightline::column_density() const {
  CompensatedSum acc;
  for (std::size_t i = 1; i < position_.size(); ++i) {
    const double width = position_[i] - position_[i - 1];
    const double level = interpolation_ == Interpolation::piecewise_linear
                             ? 0.5 * (density_[i - 1] + density_[i])
                             : density_[i - 1];
    acc.add(width * level);
  }
  return acc.value();
}

std::pair<Sightline, Sightline> Sightline::split_at(std::size_t k) const {
  if (k == 0 || k + 1 >= position_.size()) {
    throw Error(ErrorKind::invalid_argument, "split index must be an interior sample");
  }
  Sightline first({position_.begin(), position_.begin() + static_cast<std::ptrdiff_t>(k) + 1},
                  {density_.begin(), density_.begin() + static_cast<std::ptrdiff_t>(k) + 1},
                  interpolation_);
  Sightline second({position_.begin() + static_cast<std::ptrdiff_t>(k), position_.end()},
                   {density_.begin() + static_cast<std::ptrdiff_t>(k), density_.end()},
                   interpolation_);
  return {std::move(first), std::move(second)};
}

Sightline Sightline::concatenate(const Sightline& other) const {
  if (other.interpolation_ != interpolation_) {
    throw Error(ErrorKind::invalid_argument, "cannot join sightlines with different interpolation");
  }
  std::vector<double> pos = position_;
  std::vector<double> den = density_;
  const double offset = position_.back() - other.position_.front();
  // The joint sample keeps this path's density on the left and the other's on
  // the right, so duplicate the position as a zero-width step only when needed.
  for (std::size_t i = 0; i < other.position_.size(); ++i) {
    if (i == 0) {
      if (other.density_[0] == den.back()) continue;
      if (interpolation_ == Interpolation::piecewise_constant) {
        den.back() = other.density_[0];
        continue;
      }
      throw Error(ErrorKind::invalid_argument,
                  "piecewise-linear sightlines must agree in density at the joint");
    }
    pos.push_back(other.position_[i] + offset);
    den.push_back(other.density_[i]);
  }
  return Sightline(std::move(pos), std::move(den), interpolation_);
}

double redshift_along(const Sightline& sightline, const ShiftCoefficient& coeff) {
  return std::expm1(coeff.kappa_m2 * sightline.column_density());
}

double effective_rate(const Sightline& sightline, const ShiftCoefficient& coeff) {
  return std::log1p(redshift_along(sightline, coeff)) / sightline.length();
}

double frequency_multiplier(double frequency_hz, double z, const ShiftCoefficient& coeff) {
  if (!(z > -1.0)) throw Error(ErrorKind::invalid_argument, "z must be > -1");
  if (!positive(frequency_hz)) throw Error(ErrorKind::invalid_argument, "frequency must be > 0");
  if (coeff.dispersion == 0.0) return 1.0 / (1.0 + z);
  const double slope = 1.0 + coeff.dispersion * std::log10(frequency_hz / coeff.reference_frequency_hz);
  const double denom = 1.0 + z * slope;
  if (!(denom > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "dispersion law gives a non-positive multiplier");
  }
  return 1.0 / denom;
}

double relative_shift(double frequency_hz, double z, const ShiftCoefficient& coeff) {
  return 1.0 - frequency_multiplier(frequency_hz, z, coeff);
}

Spectrum apply_redshift(const Spectrum& spectrum, double z, const ShiftCoefficient& coeff) {
  if (!(z > -1.0)) throw Error(ErrorKind::invalid_argument, "z must be > -1");
  Spectrum out;
  out.reserve(spectrum.size());
  for (const auto& line : spectrum) {
    if (!positive(line.wavelength_nm)) {
      throw Error(ErrorKind::invalid_argument, "wavelengths must be > 0");
    }
    const double m = frequency_multiplier(frequency_of(line.wavelength_nm), z, coeff);
    out.push_back({line.wavelength_nm / m, line.amplitude});
  }
  return out;
}

double stimulated_shift(double intensity_w_per_m2, double proportionality) {
  if (!(intensity_w_per_m2 >= 0.0)) {
    throw Error(ErrorKind::invalid_argument, "intensity must be >= 0");
  }
  return proportionality * intensity_w_per_m2;
}

DopplerComparison compare_to_doppler(const Spectrum& spectrum, double z,
                                     const ShiftCoefficient& coeff) {
  DopplerComparison report;
  const double doppler = 1.0 - 1.0 / (1.0 + z);
  for (const auto& line : spectrum) {
    const double ilcrs = relative_shift(frequency_of(line.wavelength_nm), z, coeff);
    const double deviation = std::fabs(ilcrs - doppler);
    report.lines.push_back({line.wavelength_nm, ilcrs, doppler, deviation});
    report.max_deviation = std::max(report.max_deviation, deviation);
  }
  return report;
}

Sightline read_sightline_csv(std::istream& in, Interpolation interpolation) {
  const auto table = csv::read_numeric(in, 2);
  return Sightline(table.column(0), table.column(1), interpolation);
}

Spectrum read_spectrum_csv(std::istream& in) {
  const auto table = csv::read_numeric(in, 2);
  Spectrum out;
  for (const auto& row : table.rows) out.push_back({row[0], row[1]});
  return out;
}

std::string spectrum_csv(const Spectrum& spectrum) {
  csv::Writer w({"wavelength_nm", "amplitude"});
  for (const auto& line : spectrum) w.add_numeric_row({line.wavelength_nm, line.amplitude});
  return w.str();
}

std::string doppler_csv(const DopplerComparison& comparison) {
  csv::Writer w({"wavelength_nm", "ilcrs_relative_shift", "doppler_relative_shift", "deviation"});
  for (const auto& d : comparison.lines) {
    w.add_numeric_row({d.wavelength_nm, d.ilcrs_relative_shift, d.doppler_relative_shift,
                       d.deviation});
  }
  return w.str();
}

}  // namespace sedsim::ilcrs
