#include <algorithm>
#include <cmath>

#include "schema.hpp"
#include "sedsim/harness.hpp"

namespace sedsim::harness {

namespace detail {

namespace {

Check positive() {
  return [](const Json& v) -> std::optional<std::string> {
    if (v.get<double>() > 0.0) return std::nullopt;
    return "must be > 0";
  };
}

Check nonnegative() {
  return [](const Json& v) -> std::optional<std::string> {
    if (v.get<double>() >= 0.0) return std::nullopt;
    return "must be >= 0";
  };
}

Check greater_than(double bound, std::string text) {
  return [bound, text](const Json& v) -> std::optional<std::string> {
    if (v.get<double>() > bound) return std::nullopt;
    return "must be > " + text;
  };
}

Check at_least(long long bound) {
  return [bound](const Json& v) -> std::optional<std::string> {
    if (v.get<long long>() >= bound) return std::nullopt;
    return "must be an integer >= " + std::to_string(bound);
  };
}

Check one_of(std::vector<std::string> choices) {
  return [choices](const Json& v) -> std::optional<std::string> {
    const auto s = v.get<std::string>();
    if (std::find(choices.begin(), choices.end(), s) != choices.end()) return std::nullopt;
    std::string text = "must be one of";
    for (const auto& c : choices) text += " " + c;
    return text;
  };
}

Check nonempty() {
  return [](const Json& v) -> std::optional<std::string> {
    if (!v.get<std::string>().empty() && !v.empty()) return std::nullopt;
    return "must not be empty";
  };
}

Check nonempty_array() {
  return [](const Json& v) -> std::optional<std::string> {
    if (!v.empty()) return std::nullopt;
    return "must not be empty";
  };
}

bool has(const Json& p, const char* key) { return p.contains(key); }

void require_exactly_one(const Json& p, const std::string& a, const std::vector<std::string>& b,
                         std::vector<ConfigError>& errors) {
  const bool have_a = p.contains(a);
  bool have_all_b = true;
  bool have_any_b = false;
  for (const auto& k : b) {
    have_all_b = have_all_b && p.contains(k);
    have_any_b = have_any_b || p.contains(k);
  }
  std::string group;
  for (const auto& k : b) group += (group.empty() ? "" : "+") + k;
  if (have_a && have_any_b) {
    errors.push_back({"parameters." + a, "cannot be combined with " + group});
  } else if (!have_a && !have_all_b) {
    errors.push_back({"parameters." + a, "either " + a + " or all of " + group + " is required"});
  }
}

void require_less(const Json& p, const char* lo, const char* hi, std::vector<ConfigError>& errors) {
  if (has(p, lo) && has(p, hi) && p[lo].is_number() && p[hi].is_number() &&
      !(p[lo].get<double>() < p[hi].get<double>())) {
    errors.push_back({std::string("parameters.") + hi, std::string("must be > ") + lo});
  }
}

std::map<std::string, ExperimentSchema> build_schemas() {
  std::map<std::string, ExperimentSchema> s;

  s["planck"] = {
      {"planck", "Planck mean energy with and without the zero-point term, zero-point sampling",
       {"planck_mean_energy", "planck_mean_energy_with_zero_point",
        "sample_stochastic_amplitude"}},
      {{"temperature_k", Kind::number, true, nullptr, nonnegative()},
       {"nu_min_hz", Kind::number, true, nullptr, positive()},
       {"nu_max_hz", Kind::number, true, nullptr, positive()},
       {"points", Kind::integer, false, 101, at_least(2)},
       {"zero_point_nu_hz", Kind::number, false, nullptr, positive()}},
      [](const Json& p, std::vector<ConfigError>& e) { require_less(p, "nu_min_hz", "nu_max_hz", e); }};

  s["mode"] = {
      {"mode", "Spectral mode normalization and energy",
       {"normalize_mode", "mode_energy"}},
      {{"input", Kind::string, false, nullptr, nonempty()},
       {"nu_min_hz", Kind::number, false, nullptr, positive()},
       {"nu_max_hz", Kind::number, false, nullptr, positive()},
       {"points", Kind::integer, false, nullptr, at_least(2)},
       {"density_j_per_hz", Kind::number, false, nullptr, nonnegative()}},
      [](const Json& p, std::vector<ConfigError>& e) {
        require_exactly_one(p, "input", {"nu_min_hz", "nu_max_hz", "points", "density_j_per_hz"}, e);
        require_less(p, "nu_min_hz", "nu_max_hz", e);
      }};

  s["detector"] = {
      {"detector", "Low-light linearization and photocell signal",
       {"linearized_response", "photocell_signal", "detection_response"}},
      {{"baseline_e0", Kind::number, false, 1.0, positive()},
       {"gain", Kind::number, false, 1.0, positive()},
       {"response", Kind::number_array, false, Json::array({0.0, 0.0, 1.0}), nonempty_array()},
       {"beta_min", Kind::number, false, 0.99, nonnegative()},
       {"beta_max", Kind::number, false, 1.01, nonnegative()},
       {"points", Kind::integer, false, 21, at_least(2)},
       {"regime", Kind::string, false, "amplitude", one_of({"amplitude", "intensity"})}},
      [](const Json& p, std::vector<ConfigError>& e) { require_less(p, "beta_min", "beta_max", e); }};

  s["interference"] = {
      {"interference", "Two-source coincidence fringes and visibility",
       {"coincidence_rate", "mean_coincidence", "scan_fringes", "visibility"}},
      {{"wavelength_m", Kind::number, true, nullptr, positive()},
       {"regime", Kind::string, false, "both", one_of({"amplitude", "intensity", "both"})},
       {"points", Kind::integer, false, 101, at_least(2)},
       {"delta_min_m", Kind::number, false, 0.0, nullptr},
       {"delta_max_m", Kind::number, false, nullptr, nullptr},
       {"method", Kind::string, false, "monte_carlo", one_of({"monte_carlo", "closed_form"})}},
      [](const Json& p, std::vector<ConfigError>& e) { require_less(p, "delta_min_m", "delta_max_m", e); }};

  s["eckart"] = {
      {"eckart", "Eckart frame binding, permutation resolution, symmetry operations",
       {"center_of_mass", "bind_frame", "resolve_permutation", "symmetry_operations"}},
      {{"molecule", Kind::string, true, nullptr, nonempty()},
       {"reference", Kind::string, true, nullptr, nonempty()},
       {"mass_tolerance", Kind::number, false, 1e-6, positive()},
       {"solver", Kind::string, false, "automatic", one_of({"automatic", "exhaustive", "assignment"})},
       {"resolve_permutation", Kind::boolean, false, true, nullptr},
       {"frame_tolerance", Kind::number, false, 1e-10, positive()},
       {"symmetry_tolerance", Kind::number, false, 1e-6, positive()}},
      nullptr};

  s["ilcrs"] = {
      {"ilcrs", "Sightline redshift, spectrum shift, Doppler comparison, pulse checks",
       {"ultrashort_check", "calibrate_kappa", "redshift_along", "apply_redshift",
        "stimulated_shift", "compare_to_doppler"}},
      {{"sightline", Kind::string, false, nullptr, nonempty()},
       {"uniform_density_per_m3", Kind::number, false, nullptr, nonnegative()},
       {"length_m", Kind::number, false, nullptr, positive()},
       {"interpolation", Kind::string, false, "linear", one_of({"linear", "constant"})},
       {"kappa_m2", Kind::number, false, nullptr, nonnegative()},
       {"calibrate_density", Kind::number, false, nullptr, positive()},
       {"calibrate_rate", Kind::number, false, nullptr, positive()},
       {"dispersion", Kind::number, false, 0.0, nullptr},
       {"reference_frequency_hz", Kind::number, false, 299792458.0 / 550e-9, positive()},
       {"z", Kind::number, false, nullptr, greater_than(-1.0, "-1")},
       {"spectrum", Kind::string, false, nullptr, nonempty()},
       {"pulse_length_s", Kind::number, false, 1e-8, positive()},
       {"collision_time_s", Kind::number, false, nullptr, positive()},
       {"raman_frequency_hz", Kind::number, false, nullptr, positive()},
       {"margin", Kind::number, false, 1.0, positive()},
       {"stimulated_proportionality", Kind::number, false, nullptr, nullptr},
       {"intensity_max_w_per_m2", Kind::number, false, 1.0, positive()}},
      [](const Json& p, std::vector<ConfigError>& e) {
        const bool have_path = p.contains("sightline") || p.contains("uniform_density_per_m3") ||
                               p.contains("length_m");
        if (have_path) {
          require_exactly_one(p, "sightline", {"uniform_density_per_m3", "length_m"}, e);
          require_exactly_one(p, "kappa_m2", {"calibrate_density", "calibrate_rate"}, e);
        } else if (!p.contains("z")) {
          e.push_back({"parameters.z", "required when no sightline is given"});
        }
        if (p.contains("collision_time_s") != p.contains("raman_frequency_hz")) {
          e.push_back({"parameters.raman_frequency_hz",
                       "collision_time_s and raman_frequency_hz must be given together"});
        }
      }};

  s["soliton"] = {
      {"soliton", "Stable rotation angle and quantized torus radii",
       {"curl_correction", "find_stable_alpha", "quantized_radii"}},
      {{"response", Kind::number_array, false, nullptr, nonempty_array()},
       {"response_csv", Kind::string, false, nullptr, nonempty()},
       {"alpha_min", Kind::number, false, 1e-3, nullptr},
       {"alpha_max", Kind::number, false, 10.0, nullptr},
       {"tol", Kind::number, false, 1e-12, positive()},
       {"scan_cells", Kind::integer, false, 1000, at_least(1)},
       {"period_m", Kind::number, true, nullptr, positive()},
       {"evanescent_radius_m", Kind::number, true, nullptr, positive()},
       {"k_max", Kind::integer, false, 10, at_least(1)},
       {"target_radius_m", Kind::number, false, nullptr, positive()},
       {"xi_m", Kind::number, false, nullptr, nullptr}},
      [](const Json& p, std::vector<ConfigError>& e) {
        if (p.contains("response") == p.contains("response_csv")) {
          e.push_back({"parameters.response", "exactly one of response or response_csv is required"});
        }
        require_less(p, "alpha_min", "alpha_max", e);
      }};

  return s;
}

bool kind_matches(Kind kind, const Json& v) {
  switch (kind) {
    case Kind::number: return v.is_number();
    case Kind::integer: return v.is_number_integer();
    case Kind::string: return v.is_string();
    case Kind::boolean: return v.is_boolean();
    case Kind::number_array:
      return v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& x) { return x.is_number(); });
  }
  return false;
}

const char* kind_name(Kind kind) {
  switch (kind) {
    case Kind::number: return "must be a number";
    case Kind::integer: return "must be an integer";
    case Kind::string: return "must be a string";
    case Kind::boolean: return "must be true or false";
    case Kind::number_array: return "must be an array of numbers";
  }
  return "has the wrong type";
}

// Numbers are stored as doubles so that 1 and 1.0 canonicalize identically.
Json normalize(Kind kind, const Json& v) {
  if (kind == Kind::number) return v.get<double>();
  if (kind == Kind::number_array) {
    Json out = Json::array();
    for (const auto& x : v) out.push_back(x.get<double>());
    return out;
  }
  return v;
}

}  // namespace

const std::map<std::string, ExperimentSchema>& schemas() {
  static const auto table = build_schemas();
  return table;
}

}  // namespace detail

namespace {

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace

Json ExperimentConfig::to_json() const {
  return Json{{"experiment", experiment},
              {"parameters", parameters},
              {"master_seed", master_seed},
              {"trials", trials},
              {"output", output}};
}

ValidationFailure::ValidationFailure(std::vector<ConfigError> errors)
    : std::runtime_error([&errors] {
        std::string text = "invalid configuration:";
        for (const auto& e : errors) text += "\n  " + e.message();
        return text;
      }()),
      errors_(std::move(errors)) {}

ValidationResult validate_config(std::string_view raw) {
  Json parsed;
  try {
    parsed = Json::parse(raw.begin(), raw.end());
  } catch (const Json::parse_error& e) {
    // nlohmann reports the byte just past the offending token.
    const auto [line, column] = line_column(raw, e.byte > 0 ? e.byte - 1 : 0);
    return {std::nullopt,
            {{"config", "JSON syntax error at line " + std::to_string(line) + ", column " +
                            std::to_string(column)}}};
  }
  return validate_config_object(parsed);
}

ValidationResult validate_config_object(const Json& raw) {
  using detail::Kind;
  std::vector<ConfigError> errors;
  if (!raw.is_object()) return {std::nullopt, {{"config", "must be a JSON object"}}};

  static const std::vector<std::string> top_keys{"experiment", "parameters", "master_seed",
                                                 "trials", "output"};
  for (const auto& [key, value] : raw.items()) {
    if (std::find(top_keys.begin(), top_keys.end(), key) == top_keys.end()) {
      errors.push_back({key, "unknown field"});
    }
  }

  ExperimentConfig config;
  const detail::ExperimentSchema* schema = nullptr;
  if (!raw.contains("experiment")) {
    errors.push_back({"experiment", "is required"});
  } else if (!raw["experiment"].is_string()) {
    errors.push_back({"experiment", "must be a string"});
  } else {
    config.experiment = raw["experiment"].get<std::string>();
    const auto it = detail::schemas().find(config.experiment);
    if (it == detail::schemas().end()) {
      std::string names;
      for (const auto& [name, s] : detail::schemas()) names += " " + name;
      errors.push_back({"experiment", "must be one of" + names});
    } else {
      schema = &it->second;
    }
  }

  if (raw.contains("master_seed")) {
    const auto& v = raw["master_seed"];
    if (v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0)) {
      config.master_seed = v.get<std::uint64_t>();
    } else {
      errors.push_back({"master_seed", "must be an unsigned 64-bit integer"});
    }
  }
  if (raw.contains("trials")) {
    const auto& v = raw["trials"];
    const bool positive_integer =
        v.is_number_unsigned() ? v.get<std::uint64_t>() >= 1
                               : v.is_number_integer() && v.get<long long>() >= 1;
    if (positive_integer) {
      config.trials = v.get<std::uint64_t>();
    } else {
      errors.push_back({"trials", "must be an integer >= 1"});
    }
  } else {
    config.trials = 100000;
  }
  if (raw.contains("output")) {
    if (raw["output"].is_string() && !raw["output"].get<std::string>().empty()) {
      config.output = raw["output"].get<std::string>();
    } else {
      errors.push_back({"output", "must be a nonempty string"});
    }
  }

  Json params = raw.contains("parameters") ? raw["parameters"] : Json::object();
  if (!params.is_object()) {
    errors.push_back({"parameters", "must be an object"});
    params = Json::object();
  }
  if (schema) {
    Json normalized = Json::object();
    for (const auto& [key, value] : params.items()) {
      const bool known = std::any_of(schema->params.begin(), schema->params.end(),
                                     [&key](const auto& spec) { return spec.name == key; });
      if (!known) errors.push_back({"parameters." + key, "unknown parameter"});
    }
    for (const auto& spec : schema->params) {
      const std::string field = "parameters." + spec.name;
      if (!params.contains(spec.name)) {
        if (spec.required) {
          errors.push_back({field, "is required"});
        } else if (!spec.default_value.is_null()) {
          normalized[spec.name] = detail::normalize(spec.kind, spec.default_value);
        }
        continue;
      }
      const Json& value = params[spec.name];
      if (!detail::kind_matches(spec.kind, value)) {
        errors.push_back({field, detail::kind_name(spec.kind)});
        continue;
      }
      if (spec.check) {
        if (auto problem = spec.check(value)) {
          errors.push_back({field, *problem});
          continue;
        }
      }
      normalized[spec.name] = detail::normalize(spec.kind, value);
    }
    if (schema->cross_check) schema->cross_check(normalized, errors);
    config.parameters = std::move(normalized);
  }

  if (!errors.empty()) return {std::nullopt, std::move(errors)};
  return {std::move(config), {}};
}

std::string canonical_config(const ExperimentConfig& config) {
  return config.to_json().dump(2) + "\n";
}

const std::vector<ExperimentInfo>& registered_experiments() {
  static const std::vector<ExperimentInfo> list = [] {
    std::vector<ExperimentInfo> out;
    for (const auto& [name, schema] : detail::schemas()) out.push_back(schema.info);
    return out;
  }();
  return list;
}

bool is_registered(std::string_view name) {
  return detail::schemas().count(std::string(name)) != 0;
}

}  // namespace sedsim::harness
