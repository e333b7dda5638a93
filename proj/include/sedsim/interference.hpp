#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sedsim/detection.hpp"

namespace sedsim::interference {

using detection::Regime;

// Two incoherent sources observed by two small photocells. delta1/delta2 are
// the optical path differences at each cell.
struct TwoSourceSetup {
  double wavelength_m;
  double delta1_m;
  double delta2_m;
  Regime regime;
  std::uint64_t trials;

  TwoSourceSetup(double wavelength, double delta1, double delta2, Regime regime,
                 std::uint64_t trials = 1);
};

// Instantaneous coincidence signal for relative source phase phi. Each cell sees
// the amplitude factor cos(pi delta_j / lambda + phi / 2). In the amplitude
// regime the signed product is returned so that phase averaging keeps the
// cancellation; in the intensity regime the product of squares.
double coincidence_rate(const TwoSourceSetup& setup, double phi);

// Phase average over phi uniform on [0, 2 pi).
//   amplitude: cos(pi (delta1 - delta2) / lambda) / 2
//   intensity: 1/4 + cos(2 pi (delta1 - delta2) / lambda) / 8
double closed_form_mean_coincidence(const TwoSourceSetup& setup);

struct MonteCarloOptions {
  std::uint64_t master_seed = 0;
  // Distinguishes independent estimates drawn from the same master seed (e.g.
  // scan points). Trial i of stream s uses phi from derive_seed(master, {s, i}).
  std::uint64_t stream = 0;
  unsigned workers = 1;  // 0 = hardware concurrency
};

struct CoincidenceEstimate {
  double mean;
  double standard_error;  // 0 for the closed form
};

enum class Averaging { closed_form, monte_carlo };

// Monte-Carlo estimate over setup.trials phases. Bit-identical for any worker
// count: trials are summed in fixed blocks (compensated) and blocks are reduced
// in index order.
CoincidenceEstimate monte_carlo_mean_coincidence(const TwoSourceSetup& setup,
                                                 const MonteCarloOptions& options);

CoincidenceEstimate mean_coincidence(const TwoSourceSetup& setup, Averaging averaging,
                                     const MonteCarloOptions& options = {});

struct FringeRow {
  double delta_m;  // delta1 - delta2, with delta2 = 0
  double mean_coincidence;
  double standard_error;
};

using FringeTable = std::vector<FringeRow>;

// One row per path difference; row k uses Monte-Carlo stream k.
FringeTable scan_fringes(const TwoSourceSetup& setup, const std::vector<double>& deltas,
                         Averaging averaging, const MonteCarloOptions& options = {});

// Evenly spaced path differences over [first, last], inclusive.
std::vector<double> linspace(double first, double last, std::size_t points);

// (max - min) / (max + min) over |mean_coincidence|.
double visibility(const FringeTable& table);

// CSV with header delta_m,mean_coincidence.
std::string fringe_csv(const FringeTable& table);

}  // namespace sedsim::interference
