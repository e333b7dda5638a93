#include "sedsim/interference.hpp"

#include <algorithm>
#include <cmath>

#include "sedsim/constants.hpp"
#include "sedsim/csv.hpp"
#include "sedsim/error.hpp"
#include "sedsim/parallel.hpp"
#include "sedsim/random.hpp"
#include "sedsim/summation.hpp"

namespace sedsim::interference {

namespace {

struct BlockMoments {
  double sum = 0.0;
  double sum_sq = 0.0;
};

const detection::Photodetector& unit_detector(Regime regime) {
  static const detection::Photodetector amplitude(1.0, Regime::amplitude, 1.0);
  static const detection::Photodetector intensity(1.0, Regime::intensity, 1.0);
  return regime == Regime::amplitude ? amplitude : intensity;
}

}  // namespace

TwoSourceSetup::TwoSourceSetup(double wavelength, double delta1, double delta2, Regime r,
                               std::uint64_t n)
    : wavelength_m(wavelength), delta1_m(delta1), delta2_m(delta2), regime(r), trials(n) {
  if (!(wavelength > 0.0) || !std::isfinite(wavelength)) {
    throw Error(ErrorKind::invalid_argument, "wavelength must be > 0");
  }
  if (!std::isfinite(delta1) || !std::isfinite(delta2)) {
    throw Error(ErrorKind::invalid_argument, "path differences must be finite");
  }
  if (n < 1) throw Error(ErrorKind::invalid_argument, "trials must be >= 1");
}

double coincidence_rate(const TwoSourceSetup& setup, double phi) {
  const double f1 = std::cos(constants::pi * setup.delta1_m / setup.wavelength_m + 0.5 * phi);
  const double f2 = std::cos(constants::pi * setup.delta2_m / setup.wavelength_m + 0.5 * phi);
  const auto& detector = unit_detector(setup.regime);
  const double product = detection::detection_response(detector, f1) *
                         detection::detection_response(detector, f2);
  if (setup.regime == Regime::amplitude && (f1 < 0.0) != (f2 < 0.0)) return -product;
  return product;
}

double closed_form_mean_coincidence(const TwoSourceSetup& setup) {
  const double phase = constants::pi * (setup.delta1_m - setup.delta2_m) / setup.wavelength_m;
  if (setup.regime == Regime::amplitude) return 0.5 * std::cos(phase);
  return 0.25 + 0.125 * std::cos(2.0 * phase);
}

CoincidenceEstimate monte_carlo_mean_coincidence(const TwoSourceSetup& setup,
                                                 const MonteCarloOptions& options) {
  const std::uint64_t n = setup.trials;
  const auto blocks = map_blocks<BlockMoments>(
      n, options.workers, [&](std::size_t begin, std::size_t end) {
        CompensatedSum sum;
        CompensatedSum sum_sq;
        for (std::size_t i = begin; i < end; ++i) {
          const double u = to_unit_interval(derive_seed(options.master_seed, {options.stream, i}));
          const double value = coincidence_rate(setup, constants::two_pi * u);
          sum.add(value);
          sum_sq.add(value * value);
        }
        return BlockMoments{sum.value(), sum_sq.value()};
      });

  CompensatedSum total;
  CompensatedSum total_sq;
  for (const auto& b : blocks) {
    total.add(b.sum);
    total_sq.add(b.sum_sq);
  }
  const double count = static_cast<double>(n);
  const double mean = total.value() / count;
  double standard_error = 0.0;
  if (n > 1) {
    const double variance =
        std::max(0.0, (total_sq.value() - count * mean * mean) / (count - 1.0));
    standard_error = std::sqrt(variance / count);
  }
  return {mean, standard_error};
}

CoincidenceEstimate mean_coincidence(const TwoSourceSetup& setup, Averaging averaging,
                                     const MonteCarloOptions& options) {
  if (averaging == Averaging::closed_form) return {closed_form_mean_coincidence(setup), 0.0};
  return monte_carlo_mean_coincidence(setup, options);
}

FringeTable scan_fringes(const TwoSourceSetup& setup, const std::vector<double>& deltas,
                         Averaging averaging, const MonteCarloOptions& options) {
  if (deltas.empty()) throw Error(ErrorKind::invalid_argument, "scan range must be nonempty");
  FringeTable table;
  table.reserve(deltas.size());
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    const TwoSourceSetup point(setup.wavelength_m, deltas[k], 0.0, setup.regime, setup.trials);
    MonteCarloOptions point_options = options;
    point_options.stream = k;
    const auto estimate = mean_coincidence(point, averaging, point_options);
    table.push_back({deltas[k], estimate.mean, estimate.standard_error});
  }
  return table;
}

std::vector<double> linspace(double first, double last, std::size_t points) {
  if (points == 0) return {};
  if (points == 1) return {first};
  std::vector<double> out(points);
  const double step = (last - first) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) out[i] = first + step * static_cast<double>(i);
  out.back() = last;
  return out;
}

double visibility(const FringeTable& table) {
  if (table.empty()) throw Error(ErrorKind::undefined_visibility, "empty scan");
  double hi = 0.0;
  double lo = std::fabs(table.front().mean_coincidence);
  for (const auto& row : table) {
    const double m = std::fabs(row.mean_coincidence);
    hi = std::max(hi, m);
    lo = std::min(lo, m);
  }
  if (hi + lo == 0.0) throw Error(ErrorKind::undefined_visibility, "all-zero scan");
  return (hi - lo) / (hi + lo);
}

std::string fringe_csv(const FringeTable& table) {
  csv::Writer w({"delta_m", "mean_coincidence"});
  for (const auto& row : table) w.add_numeric_row({row.delta_m, row.mean_coincidence});
  return w.str();
}

}  // namespace sedsim::interference
