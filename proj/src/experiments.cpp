#include <cmath>
#include <fstream>
#include <limits>

#include "schema.hpp"
#include "sedsim/constants.hpp"
#include "sedsim/csv.hpp"
#include "sedsim/detection.hpp"
#include "sedsim/eckart.hpp"
#include "sedsim/error.hpp"
#include "sedsim/field_core.hpp"
#include "sedsim/ilcrs.hpp"
#include "sedsim/interference.hpp"
#include "sedsim/parallel.hpp"
#include "sedsim/random.hpp"
#include "sedsim/soliton.hpp"
#include "sedsim/summation.hpp"

namespace sedsim::harness::detail {

namespace {

double number(const Json& p, const char* key) { return p.at(key).get<double>(); }
long long integer(const Json& p, const char* key) { return p.at(key).get<long long>(); }
std::string text(const Json& p, const char* key) { return p.at(key).get<std::string>(); }

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::parse_error, "cannot open " + path);
  return in;
}

}  // namespace

ExperimentResult run_planck(const ExperimentConfig& config, const RunOptions& options) {
  const Json& p = config.parameters;
  const field::ThermalState state(number(p, "temperature_k"));
  const auto grid = interference::linspace(number(p, "nu_min_hz"), number(p, "nu_max_hz"),
                                           static_cast<std::size_t>(integer(p, "points")));
  ExperimentResult result;

  csv::Writer table({"nu_hz", "h_nu_over_kT", "thermal_j", "with_zero_point_j", "zero_point_j"});
  for (double nu : grid) {
    const double quantum = constants::planck_h * nu;
    const double kt = constants::boltzmann_k * state.temperature_k;
    table.add_numeric_row({nu, kt > 0.0 ? quantum / kt : std::numeric_limits<double>::infinity(),
                           field::planck_mean_energy(nu, state),
                           field::planck_mean_energy_with_zero_point(nu, state), 0.5 * quantum});
  }
  result.files["planck.csv"] = table.str();

  if (p.contains("zero_point_nu_hz")) {
    const double nu = number(p, "zero_point_nu_hz");
    const std::uint64_t n = config.trials;
    struct Moments {
      double sum = 0.0;
      double sum_sq = 0.0;
    };
    const auto blocks = map_blocks<Moments>(n, options.workers, [&](std::size_t b, std::size_t e) {
      CompensatedSum s, s2;
      for (std::size_t i = b; i < e; ++i) {
        SplitMix64 gen(derive_seed(config.master_seed, {i}));
        const double energy = field::sample_stochastic_amplitude(gen, nu).energy();
        s.add(energy);
        s2.add(energy * energy);
      }
      return Moments{s.value(), s2.value()};
    });
    CompensatedSum s, s2;
    for (const auto& m : blocks) {
      s.add(m.sum);
      s2.add(m.sum_sq);
    }
    const double count = static_cast<double>(n);
    const double mean = s.value() / count;
    const double var = n > 1 ? std::max(0.0, (s2.value() - count * mean * mean) / (count - 1.0)) : 0.0;
    const double target = 0.5 * constants::planck_h * nu;
    csv::Writer zp({"nu_hz", "samples", "mean_energy_j", "target_j", "relative_error",
                    "standard_error_j"});
    zp.add_row({csv::format_number(nu), std::to_string(n), csv::format_number(mean),
                csv::format_number(target), csv::format_number(mean / target - 1.0),
                csv::format_number(std::sqrt(var / count))});
    result.files["zero_point.csv"] = zp.str();
    result.summary["zero_point_relative_error"] = mean / target - 1.0;
  }
  return result;
}

ExperimentResult run_mode(const ExperimentConfig& config, const RunOptions&) {
  const Json& p = config.parameters;
  auto mode = [&p] {
    if (p.contains("input")) {
      auto in = open_input(text(p, "input"));
      return field::read_mode_csv(in);
    }
    auto grid = interference::linspace(number(p, "nu_min_hz"), number(p, "nu_max_hz"),
                                       static_cast<std::size_t>(integer(p, "points")));
    std::vector<double> density(grid.size(), number(p, "density_j_per_hz"));
    return field::SpectralMode(std::move(grid), std::move(density));
  }();
  const auto normalized = field::normalize_mode(mode);
  ExperimentResult result;
  result.files["normalized_mode.csv"] = field::mode_csv(normalized.mode);
  csv::Writer summary({"scale", "input_energy_j", "normalized_energy_j", "action_integral_js"});
  summary.add_numeric_row({normalized.scale, field::mode_energy(mode),
                           field::mode_energy(normalized.mode),
                           normalized.mode.action_integral()});
  result.files["mode_summary.csv"] = summary.str();
  result.summary["scale"] = normalized.scale;
  return result;
}

ExperimentResult run_detector(const ExperimentConfig& config, const RunOptions&) {
  const Json& p = config.parameters;
  const detection::Photodetector detector(number(p, "baseline_e0"),
                                          detection::parse_regime(text(p, "regime")),
                                          number(p, "gain"));
  const detection::ResponseCurve f(p.at("response").get<std::vector<double>>());
  const auto betas = interference::linspace(number(p, "beta_min"), number(p, "beta_max"),
                                            static_cast<std::size_t>(integer(p, "points")));
  ExperimentResult result;

  csv::Writer photocell({"beta", "exact", "approx", "abs_error", "second_order_term"});
  csv::Writer linear({"beta", "approx", "exact", "abs_error", "verbatim_approx"});
  double worst = 0.0;
  for (double beta : betas) {
    const double exact = detection::photocell_signal(detector, beta, false);
    const double approx = detection::photocell_signal(detector, beta, true);
    const double e0 = detector.baseline_e0();
    photocell.add_numeric_row({beta, exact, approx, std::fabs(exact - approx),
                               detector.gain() * e0 * e0 * (beta - 1.0) * (beta - 1.0)});
    const auto lin = detection::linearized_response(f, e0, beta);
    const auto verbatim =
        detection::linearized_response(f, e0, beta, detection::ExpansionForm::verbatim);
    linear.add_numeric_row({beta, lin.approx, lin.exact, lin.abs_error, verbatim.approx});
    worst = std::max(worst, lin.abs_error);
  }
  result.files["photocell.csv"] = photocell.str();
  result.files["linearization.csv"] = linear.str();

  csv::Writer response({"amplitude_factor", "response"});
  for (double factor : interference::linspace(-1.0, 1.0, 21)) {
    response.add_numeric_row({factor, detection::detection_response(detector, factor)});
  }
  result.files["response.csv"] = response.str();
  result.summary["max_linearization_error"] = worst;
  return result;
}

ExperimentResult run_interference(const ExperimentConfig& config, const RunOptions& options) {
  const Json& p = config.parameters;
  const double wavelength = number(p, "wavelength_m");
  const double lo = number(p, "delta_min_m");
  const double hi = p.contains("delta_max_m") ? number(p, "delta_max_m") : wavelength;
  if (!(lo < hi)) {
    throw ValidationFailure(std::vector<ConfigError>{{"parameters.delta_max_m", "must be > delta_min_m"}});
  }
  const auto deltas = interference::linspace(lo, hi, static_cast<std::size_t>(integer(p, "points")));
  const auto averaging = text(p, "method") == "closed_form" ? interference::Averaging::closed_form
                                                            : interference::Averaging::monte_carlo;
  const std::string regime = text(p, "regime");

  ExperimentResult result;
  csv::Writer summary({"regime", "visibility", "min_abs_mean", "max_abs_mean"});
  // Each regime draws from its own branch of the seed tree.
  std::uint64_t branch = 0;
  for (auto r : {detection::Regime::amplitude, detection::Regime::intensity}) {
    const std::string name(detection::to_string(r));
    ++branch;
    if (regime != "both" && regime != name) continue;
    const interference::TwoSourceSetup setup(wavelength, 0.0, 0.0, r, config.trials);
    interference::MonteCarloOptions mc{derive_seed(config.master_seed, {branch}), 0,
                                       options.workers};
    const auto table = interference::scan_fringes(setup, deltas, averaging, mc);
    result.files["scan_" + name + ".csv"] = interference::fringe_csv(table);
    double min_abs = std::fabs(table.front().mean_coincidence);
    double max_abs = 0.0;
    for (const auto& row : table) {
      min_abs = std::min(min_abs, std::fabs(row.mean_coincidence));
      max_abs = std::max(max_abs, std::fabs(row.mean_coincidence));
    }
    const double v = interference::visibility(table);
    summary.add_row({name, csv::format_number(v), csv::format_number(min_abs),
                     csv::format_number(max_abs)});
    result.summary["visibility_" + name] = v;
  }
  result.files["visibility.csv"] = summary.str();
  return result;
}

ExperimentResult run_eckart(const ExperimentConfig& config, const RunOptions&) {
  const Json& p = config.parameters;
  const double mass_tol = number(p, "mass_tolerance");
  const auto molecule = eckart::read_xyz_file(text(p, "molecule"), mass_tol);
  const eckart::EquilibriumConfiguration reference(eckart::read_xyz_file(text(p, "reference"), mass_tol));

  eckart::FrameOptions frame_options;
  frame_options.tolerance = number(p, "frame_tolerance");
  eckart::Permutation assignment(molecule.size());
  for (std::size_t i = 0; i < assignment.size(); ++i) assignment[i] = i;
  if (p.at("resolve_permutation").get<bool>()) {
    eckart::PermutationOptions perm_options;
    const auto solver = text(p, "solver");
    perm_options.solver = solver == "exhaustive"   ? eckart::PermutationSolver::exhaustive
                          : solver == "assignment" ? eckart::PermutationSolver::assignment
                                                   : eckart::PermutationSolver::automatic;
    perm_options.frame = frame_options;
    assignment = eckart::resolve_permutation(molecule, reference, perm_options).assignment;
  }
  const auto frame = eckart::bind_frame(molecule, reference, assignment, frame_options);
  const auto symmetry = eckart::symmetry_operations(reference, number(p, "symmetry_tolerance"));

  ExperimentResult result;
  result.files["frame.csv"] = eckart::frame_csv(frame);
  result.files["displacements.csv"] = eckart::displacement_csv(molecule, frame);
  result.files["symmetry.csv"] = eckart::symmetry_csv(symmetry);
  result.summary["rotational_residual"] = frame.rotational_residual;
  result.summary["translational_residual"] = frame.translational_residual;
  result.summary["displacement_objective"] = eckart::displacement_objective(frame);
  result.summary["continuous_axis"] = symmetry.continuous_axis;
  result.summary["group_order"] = symmetry.operations.size();
  return result;
}

ExperimentResult run_ilcrs(const ExperimentConfig& config, const RunOptions&) {
  const Json& p = config.parameters;
  ExperimentResult result;
  const double dispersion = number(p, "dispersion");
  const double nu_ref = number(p, "reference_frequency_hz");

  double z = 0.0;
  double kappa = 0.0;
  if (p.contains("sightline") || p.contains("uniform_density_per_m3")) {
    const auto interp = text(p, "interpolation") == "constant"
                            ? ilcrs::Interpolation::piecewise_constant
                            : ilcrs::Interpolation::piecewise_linear;
    const auto sightline = [&] {
      if (p.contains("sightline")) {
        auto in = open_input(text(p, "sightline"));
        return ilcrs::read_sightline_csv(in, interp);
      }
      return ilcrs::Sightline::uniform(number(p, "uniform_density_per_m3"), number(p, "length_m"));
    }();
    kappa = p.contains("kappa_m2")
                ? number(p, "kappa_m2")
                : ilcrs::calibrate_kappa(number(p, "calibrate_density"), number(p, "calibrate_rate"))
                      .kappa_m2;
    const ilcrs::ShiftCoefficient coeff(kappa, dispersion, nu_ref);
    z = ilcrs::redshift_along(sightline, coeff);
    csv::Writer w({"length_m", "column_density_per_m2", "kappa_m2", "z", "effective_rate_per_m"});
    w.add_numeric_row({sightline.length(), sightline.column_density(), kappa, z,
                       ilcrs::effective_rate(sightline, coeff)});
    result.files["redshift.csv"] = w.str();
  }
  if (p.contains("z")) z = number(p, "z");
  const ilcrs::ShiftCoefficient coeff(kappa, dispersion, nu_ref);

  ilcrs::Spectrum spectrum;
  if (p.contains("spectrum")) {
    auto in = open_input(text(p, "spectrum"));
    spectrum = ilcrs::read_spectrum_csv(in);
  } else {
    spectrum = {{400.0, 1.0}, {500.0, 1.0}, {600.0, 1.0}, {700.0, 1.0}};
  }
  result.files["shifted_spectrum.csv"] = ilcrs::spectrum_csv(ilcrs::apply_redshift(spectrum, z, coeff));
  const auto comparison = ilcrs::compare_to_doppler(spectrum, z, coeff);
  result.files["doppler.csv"] = ilcrs::doppler_csv(comparison);
  result.summary["z"] = z;
  result.summary["max_doppler_deviation"] = comparison.max_deviation;

  if (p.contains("collision_time_s")) {
    const ilcrs::PulseModel pulse(number(p, "pulse_length_s"), number(p, "collision_time_s"),
                                  number(p, "raman_frequency_hz"));
    const auto report = ilcrs::ultrashort_check(pulse, number(p, "margin"));
    csv::Writer w({"pulse_length_s", "collision_time_s", "raman_frequency_hz", "collision_ok",
                   "beat_ok", "overall"});
    w.add_row({csv::format_number(pulse.pulse_length_s), csv::format_number(pulse.collision_time_s),
               csv::format_number(pulse.raman_frequency_hz), report.collision_ok ? "1" : "0",
               report.beat_ok ? "1" : "0", report.overall ? "1" : "0"});
    result.files["ultrashort.csv"] = w.str();
    result.summary["ultrashort_ok"] = report.overall;
  }
  if (p.contains("stimulated_proportionality")) {
    const double k = number(p, "stimulated_proportionality");
    csv::Writer w({"intensity_w_per_m2", "relative_shift"});
    for (double intensity : interference::linspace(0.0, number(p, "intensity_max_w_per_m2"), 10)) {
      w.add_numeric_row({intensity, ilcrs::stimulated_shift(intensity, k)});
    }
    result.files["stimulated.csv"] = w.str();
  }
  return result;
}

ExperimentResult run_soliton(const ExperimentConfig& config, const RunOptions&) {
  const Json& p = config.parameters;
  const auto response = [&] {
    if (p.contains("response")) {
      return soliton::RotationResponse::polynomial(p.at("response").get<std::vector<double>>());
    }
    auto in = open_input(text(p, "response_csv"));
    return soliton::read_response_csv(in);
  }();
  soliton::SearchOptions search;
  search.alpha_min = number(p, "alpha_min");
  search.alpha_max = number(p, "alpha_max");
  search.tol = number(p, "tol");
  search.scan_cells = static_cast<std::size_t>(integer(p, "scan_cells"));
  const auto root = soliton::find_stable_alpha(response, search);

  const soliton::FilamentProfile profile(number(p, "period_m"), number(p, "evanescent_radius_m"));
  const auto candidates =
      soliton::quantized_radii(profile, static_cast<int>(integer(p, "k_max")), root.alpha0);

  ExperimentResult result;
  csv::Writer w({"alpha0_rad", "residual", "slope"});
  w.add_numeric_row({root.alpha0, root.residual, root.slope});
  result.files["stable_root.csv"] = w.str();
  result.files["candidates.csv"] = soliton::candidates_csv(candidates);
  if (p.contains("target_radius_m")) {
    const auto nearest = soliton::nearest_quantized_radius(profile, number(p, "target_radius_m"),
                                                           root.alpha0);
    result.files["nearest.csv"] = soliton::candidates_csv({nearest});
  }
  if (p.contains("xi_m")) {
    // Curl correction across the filament cross-section at the stable angle.
    csv::Writer cw({"xi_m", "correction"});
    const double xi_max = number(p, "xi_m");
    for (double xi : interference::linspace(-xi_max, xi_max, 11)) {
      cw.add_numeric_row({xi, soliton::curl_correction(xi, root.alpha0)});
    }
    result.files["curl_correction.csv"] = cw.str();
  }
  result.summary["alpha0"] = root.alpha0;
  result.summary["candidates"] = candidates.size();
  return result;
}

}  // namespace sedsim::harness::detail
