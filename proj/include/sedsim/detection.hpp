#pragma once

#include <string_view>

#include "sedsim/polynomial.hpp"

namespace sedsim::detection {

// Differentiable scalar response f(E) over normalized field units.
using ResponseCurve = Polynomial;

enum class Regime {
  amplitude,  // low light: signal follows |field amplitude|
  intensity,  // high light: signal follows amplitude squared
};

std::string_view to_string(Regime regime);
Regime parse_regime(std::string_view name);

class Photodetector {
 public:
  Photodetector(double baseline_e0, Regime regime, double gain = 1.0);

  double baseline_e0() const { return baseline_e0_; }
  Regime regime() const { return regime_; }
  double gain() const { return gain_; }

 private:
  double baseline_e0_;
  Regime regime_;
  double gain_;
};

struct Linearization {
  double approx;
  double exact;
  double abs_error;
};

enum class ExpansionForm {
  chain_rule,  // f(E0) + (beta - 1) E0 f'(E0)
  verbatim,    // f(E0) + (beta - 1) f'(E0), as commonly printed
};

// First-order expansion of f(E0 beta) about beta = 1.
Linearization linearized_response(const ResponseCurve& f, double e0, double beta,
                                  ExpansionForm form = ExpansionForm::chain_rule);

// Photocell signal over the restored baseline: gain (E0^2 beta^2 - E0^2), or its
// low-light form gain 2 E0^2 (beta - 1). Negative below baseline.
double photocell_signal(const Photodetector& detector, double beta, bool low_light_approx);

// Response to a signed amplitude factor in [-1, 1]: gain |factor| in the
// amplitude regime, gain factor^2 in the intensity regime.
double detection_response(const Photodetector& detector, double amplitude_factor);

}  // namespace sedsim::detection
