// Command-line front end: one subcommand per experiment.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sedsim/error.hpp"
#include "sedsim/harness.hpp"

namespace {

using sedsim::harness::ExitCode;
using sedsim::harness::Json;

int code(ExitCode c) { return static_cast<int>(c); }

struct Flags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<long long> trials;
  std::string out;
  unsigned threads = 1;
  std::vector<std::string> params;  // key=value, value parsed as JSON when possible
  bool check_only = false;

  std::optional<double> kappa, calibrate_density, calibrate_rate, dispersion, z;
};

void print_errors(const std::vector<sedsim::harness::ConfigError>& errors) {
  for (const auto& e : errors) std::cerr << "error: " << e.message() << '\n';
}

int run(const std::string& experiment, const Flags& flags) {
  Json raw = Json::object();
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path);
    if (!in) {
      std::cerr << "error: cannot open config " << flags.config_path << '\n';
      return code(ExitCode::usage);
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    try {
      raw = Json::parse(text);
    } catch (const Json::parse_error&) {
      print_errors(sedsim::harness::validate_config(text).errors);
      return code(ExitCode::validation);
    }
    if (!raw.is_object()) {
      std::cerr << "error: config: must be a JSON object\n";
      return code(ExitCode::validation);
    }
    if (raw.contains("experiment") && raw["experiment"] != experiment) {
      std::cerr << "error: config is for experiment " << raw["experiment"].dump()
                << ", not '" << experiment << "'\n";
      return code(ExitCode::usage);
    }
  }
  raw["experiment"] = experiment;
  if (flags.seed) raw["master_seed"] = *flags.seed;
  if (flags.trials) raw["trials"] = *flags.trials;
  if (!flags.out.empty()) raw["output"] = flags.out;
  if (!raw.contains("parameters") || !raw["parameters"].is_object()) {
    if (!raw.contains("parameters")) raw["parameters"] = Json::object();
  }
  auto set_param = [&raw](const std::string& key, Json value) {
    if (raw["parameters"].is_object()) raw["parameters"][key] = std::move(value);
  };
  for (const auto& kv : flags.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "error: --param expects key=value, got '" << kv << "'\n";
      return code(ExitCode::usage);
    }
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    Json parsed = Json::parse(value, nullptr, false);
    set_param(key, parsed.is_discarded() ? Json(value) : parsed);
  }
  if (flags.kappa) set_param("kappa_m2", *flags.kappa);
  if (flags.calibrate_density) set_param("calibrate_density", *flags.calibrate_density);
  if (flags.calibrate_rate) set_param("calibrate_rate", *flags.calibrate_rate);
  if (flags.dispersion) set_param("dispersion", *flags.dispersion);
  if (flags.z) set_param("z", *flags.z);

  const auto checked = sedsim::harness::validate_config_object(raw);
  if (!checked.ok()) {
    print_errors(checked.errors);
    return code(ExitCode::validation);
  }
  if (flags.check_only) {
    std::cout << sedsim::harness::canonical_config(*checked.config);
    return code(ExitCode::success);
  }
  try {
    const auto manifest = sedsim::harness::run_experiment(*checked.config, {flags.threads});
    std::cout << manifest.summary.dump() << '\n';
    for (const auto& f : manifest.outputs) {
      std::cout << checked.config->output << '/' << f.name << ' ' << f.sha256 << '\n';
    }
  } catch (const sedsim::harness::ValidationFailure& e) {
    print_errors(e.errors());
    return code(ExitCode::validation);
  } catch (const sedsim::harness::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return code(ExitCode::usage);
  } catch (const sedsim::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return code(sedsim::harness::exit_code_for(e.kind()));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return code(ExitCode::runtime);
  }
  return code(ExitCode::success);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Desk-scale classical electrodynamics experiments"};
  app.require_subcommand(1);
  Flags flags;

  auto add_common = [&flags](CLI::App* sub) {
    sub->add_option("--config", flags.config_path, "JSON experiment config");
    sub->add_option("--seed", flags.seed, "Master seed (unsigned 64-bit)");
    sub->add_option("--trials", flags.trials, "Monte-Carlo trials");
    sub->add_option("--out", flags.out, "Output directory");
    sub->add_option("--threads", flags.threads, "Worker threads (0 = all cores)");
    sub->add_option("--param", flags.params, "Parameter override key=value (repeatable)");
    sub->add_flag("--check", flags.check_only, "Validate and print the canonical config only");
  };

  std::vector<std::pair<std::string, CLI::App*>> subs;
  for (const auto& info : sedsim::harness::registered_experiments()) {
    CLI::App* sub = app.add_subcommand(info.name, info.summary);
    add_common(sub);
    if (info.name == "ilcrs") {
      sub->add_option("--kappa", flags.kappa, "Shift coefficient kappa (m^2)");
      sub->add_option("--calibrate-density", flags.calibrate_density,
                      "Reference density for calibration (m^-3)");
      sub->add_option("--calibrate-rate", flags.calibrate_rate,
                      "Reference relative shift per metre for calibration");
      sub->add_option("--dispersion", flags.dispersion, "Log-frequency dispersion slope");
      sub->add_option("--z", flags.z, "Redshift to apply to the spectrum");
    }
    subs.emplace_back(info.name, sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return code(ExitCode::usage);
  }
  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) return run(name, flags);
  }
  return code(ExitCode::usage);
}
