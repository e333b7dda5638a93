#include "sedsim/field_core.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <ostream>

#include "sedsim/constants.hpp"
#include "sedsim/csv.hpp"
#include "sedsim/error.hpp"
#include "sedsim/summation.hpp"

namespace sedsim::field {

namespace {

constexpr double kExponentCutoff = 700.0;

template <typename F>
double trapezoid(const std::vector<double>& x, F&& integrand) {
  CompensatedSum acc;
  for (std::size_t i = 1; i < x.size(); ++i) {
    acc.add(0.5 * (x[i] - x[i - 1]) * (integrand(i - 1) + integrand(i)));
  }
  return acc.value();
}

using Complex = std::complex<double>;

std::vector<Complex> amplitudes(const PhasedMode& m) {
  std::vector<Complex> out(m.mode.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::polar(std::sqrt(m.mode.density()[i]), m.phase[i]);
  }
  return out;
}

// Linear interpolation of complex amplitudes; zero outside [x.front(), x.back()].
Complex interpolate(const std::vector<double>& x, const std::vector<Complex>& y, double at) {
  if (at < x.front() || at > x.back()) return {0.0, 0.0};
  const auto hi = std::lower_bound(x.begin(), x.end(), at);
  const auto j = static_cast<std::size_t>(hi - x.begin());
  if (*hi == at) return y[j];
  const double t = (at - x[j - 1]) / (x[j] - x[j - 1]);
  return y[j - 1] + t * (y[j] - y[j - 1]);
}

PhasedMode from_amplitudes(std::vector<double> grid, const std::vector<Complex>& amp) {
  std::vector<double> density(amp.size());
  std::vector<double> phase(amp.size());
  for (std::size_t i = 0; i < amp.size(); ++i) {
    density[i] = std::norm(amp[i]);
    double p = std::arg(amp[i]);
    if (p < 0.0) p += constants::two_pi;
    phase[i] = p;
  }
  return PhasedMode(SpectralMode(std::move(grid), std::move(density)), std::move(phase));
}

}  // namespace

SpectralMode::SpectralMode(std::vector<double> frequency_hz, std::vector<double> density_j_per_hz,
                           bool normalized)
    : frequency_(std::move(frequency_hz)),
      density_(std::move(density_j_per_hz)),
      normalized_(normalized) {
  if (frequency_.size() != density_.size()) {
    throw Error(ErrorKind::invalid_grid, "frequency and density lengths differ");
  }
  for (std::size_t i = 0; i < frequency_.size(); ++i) {
    if (!(frequency_[i] > 0.0) || !std::isfinite(frequency_[i])) {
      throw Error(ErrorKind::invalid_grid, "frequencies must be finite and > 0");
    }
    if (i > 0 && !(frequency_[i] > frequency_[i - 1])) {
      throw Error(ErrorKind::invalid_grid, "frequencies must be strictly increasing");
    }
    if (!(density_[i] >= 0.0) || !std::isfinite(density_[i])) {
      throw Error(ErrorKind::invalid_argument, "density must be finite and >= 0");
    }
  }
  if (normalized_ && std::fabs(action_integral() - constants::planck_h) > 1e-9 * constants::planck_h) {
    throw Error(ErrorKind::not_normalizable, "mode flagged normalized but its integral is not h");
  }
}

double SpectralMode::action_integral() const {
  return trapezoid(frequency_, [this](std::size_t i) { return density_[i] / frequency_[i]; });
}

NormalizedMode normalize_mode(const SpectralMode& mode) {
  if (mode.size() < 2) throw Error(ErrorKind::invalid_grid, "need at least 2 grid points");
  const double integral = mode.action_integral();
  if (!(integral > 0.0)) {
    throw Error(ErrorKind::not_normalizable, "density integrates to zero");
  }
  const double scale = constants::planck_h / integral;
  std::vector<double> density = mode.density();
  for (double& w : density) w *= scale;
  return {SpectralMode(mode.frequency(), std::move(density), true), scale};
}

double mode_energy(const SpectralMode& mode) {
  const auto& w = mode.density();
  return trapezoid(mode.frequency(), [&w](std::size_t i) { return w[i]; });
}

PhasedMode::PhasedMode(SpectralMode m) : mode(std::move(m)), phase(mode.size(), 0.0) {}

PhasedMode::PhasedMode(SpectralMode m, std::vector<double> phase_rad)
    : mode(std::move(m)), phase(std::move(phase_rad)) {
  if (phase.size() != mode.size()) {
    throw Error(ErrorKind::invalid_grid, "phase and frequency lengths differ");
  }
}

PhasedMode superpose(const PhasedMode& a, const PhasedMode& b, GridPolicy policy) {
  const auto amp_a = amplitudes(a);
  const auto amp_b = amplitudes(b);
  if (a.mode.frequency() == b.mode.frequency()) {
    std::vector<Complex> sum(amp_a.size());
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = amp_a[i] + amp_b[i];
    return from_amplitudes(a.mode.frequency(), sum);
  }
  if (policy == GridPolicy::require_identical) {
    throw Error(ErrorKind::grid_mismatch, "frequency grids differ and resampling is disabled");
  }
  std::vector<double> grid;
  std::set_union(a.mode.frequency().begin(), a.mode.frequency().end(),
                 b.mode.frequency().begin(), b.mode.frequency().end(), std::back_inserter(grid));
  std::vector<Complex> sum(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    sum[i] = interpolate(a.mode.frequency(), amp_a, grid[i]) +
             interpolate(b.mode.frequency(), amp_b, grid[i]);
  }
  return from_amplitudes(std::move(grid), sum);
}

bool is_orthogonal(const PhasedMode& a, const PhasedMode& b, double tol, GridPolicy policy) {
  const double ea = mode_energy(a.mode);
  const double eb = mode_energy(b.mode);
  const double combined = mode_energy(superpose(a, b, policy).mode);
  return std::fabs(combined - ea - eb) <= tol * (ea + eb);
}

ThermalState::ThermalState(double t) : temperature_k(t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw Error(ErrorKind::invalid_argument, "temperature must be finite and >= 0");
  }
}

double planck_mean_energy(double nu_hz, ThermalState state) {
  if (!(nu_hz > 0.0)) throw Error(ErrorKind::invalid_argument, "frequency must be > 0");
  if (state.temperature_k == 0.0) return 0.0;
  const double quantum = constants::planck_h * nu_hz;
  const double x = quantum / (constants::boltzmann_k * state.temperature_k);
  if (x > kExponentCutoff) return 0.0;
  return quantum / std::expm1(x);
}

double planck_mean_energy_with_zero_point(double nu_hz, ThermalState state) {
  return planck_mean_energy(nu_hz, state) + 0.5 * constants::planck_h * nu_hz;
}

FieldAmplitude sample_stochastic_amplitude(SplitMix64& gen, double nu_hz) {
  if (!(nu_hz > 0.0)) throw Error(ErrorKind::invalid_argument, "frequency must be > 0");
  const double sigma = std::sqrt(0.25 * constants::planck_h * nu_hz);
  const auto [g1, g2] = standard_normal_pair(gen);
  const double re = sigma * g1;
  const double im = sigma * g2;
  double phase = std::atan2(im, re);
  if (phase < 0.0) phase += constants::two_pi;
  if (phase >= constants::two_pi) phase = 0.0;
  return {std::hypot(re, im), 1.0, phase};
}

void write_mode_csv(std::ostream& out, const SpectralMode& mode) { out << mode_csv(mode); }

std::string mode_csv(const SpectralMode& mode) {
  csv::Writer w({"frequency_hz", "density_j_per_hz"});
  for (std::size_t i = 0; i < mode.size(); ++i) {
    w.add_numeric_row({mode.frequency()[i], mode.density()[i]});
  }
  return w.str();
}

SpectralMode read_mode_csv(std::istream& in) {
  const auto table = csv::read_numeric(in, 2);
  return SpectralMode(table.column(0), table.column(1));
}

}  // namespace sedsim::field
