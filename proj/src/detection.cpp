#include "sedsim/detection.hpp"

#include <cmath>
#include <string>

#include "sedsim/error.hpp"

namespace sedsim::detection {

std::string_view to_string(Regime regime) {
  return regime == Regime::amplitude ? "amplitude" : "intensity";
}

Regime parse_regime(std::string_view name) {
  if (name == "amplitude") return Regime::amplitude;
  if (name == "intensity") return Regime::intensity;
  throw Error(ErrorKind::invalid_argument,
              "unknown regime '" + std::string(name) + "' (expected amplitude or intensity)");
}

Photodetector::Photodetector(double baseline_e0, Regime regime, double gain)
    : baseline_e0_(baseline_e0), regime_(regime), gain_(gain) {
  if (!(baseline_e0 > 0.0) || !std::isfinite(baseline_e0)) {
    throw Error(ErrorKind::invalid_argument, "baseline_e0 must be > 0");
  }
  if (!(gain > 0.0) || !std::isfinite(gain)) {
    throw Error(ErrorKind::invalid_argument, "gain must be > 0");
  }
}

Linearization linearized_response(const ResponseCurve& f, double e0, double beta,
                                  ExpansionForm form) {
  if (!(e0 > 0.0)) throw Error(ErrorKind::invalid_argument, "E0 must be > 0");
  const double slope = f.derivative()(e0);
  const double lever = form == ExpansionForm::chain_rule ? e0 : 1.0;
  const double approx = f(e0) + (beta - 1.0) * lever * slope;
  const double exact = f(e0 * beta);
  return {approx, exact, std::fabs(approx - exact)};
}

double photocell_signal(const Photodetector& detector, double beta, bool low_light_approx) {
  if (!(beta >= 0.0)) throw Error(ErrorKind::invalid_argument, "beta must be >= 0");
  const double e0 = detector.baseline_e0();
  const double g = detector.gain();
  if (low_light_approx) return g * 2.0 * e0 * e0 * (beta - 1.0);
  // gain E0^2 (beta^2 - 1), factored so that beta near 1 keeps full relative
  // precision (beta - 1 is exact there).
  return g * e0 * e0 * ((beta - 1.0) * (beta + 1.0));
}

double detection_response(const Photodetector& detector, double amplitude_factor) {
  if (!(std::fabs(amplitude_factor) <= 1.0)) {
    throw Error(ErrorKind::invalid_amplitude, "amplitude factor must lie in [-1, 1]");
  }
  const double g = detector.gain();
  return detector.regime() == Regime::amplitude ? g * std::fabs(amplitude_factor)
                                                : g * amplitude_factor * amplitude_factor;
}

}  // namespace sedsim::detection
