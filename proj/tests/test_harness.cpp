#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "sedsim/error.hpp"
#include "sedsim/harness.hpp"

using namespace sedsim;
using namespace sedsim::harness;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = SEDSIM_FIXTURES_DIR;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sedsim_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Loads a shipped example config, pointing file inputs at the fixtures folder
// and output at a scratch directory.
Json example_config(const std::string& experiment, const fs::path& out) {
  Json j = Json::parse(slurp(kFixtures / "configs" / (experiment + ".json")));
  for (auto& [key, value] : j["parameters"].items()) {
    if (value.is_string() && value.get<std::string>().rfind("fixtures/", 0) == 0) {
      value = (kFixtures / value.get<std::string>().substr(9)).string();
    }
  }
  j["output"] = out.string();
  return j;
}

ExperimentConfig valid(const Json& j) {
  auto r = validate_config_object(j);
  for (const auto& e : r.errors) MESSAGE(e.message());
  REQUIRE(r.ok());
  return *r.config;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SEDSIM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::map<std::string, std::string> csv_outputs(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".csv") out[entry.path().filename().string()] = slurp(entry.path());
  }
  return out;
}

}  // namespace

TEST_CASE("minimal configs validate for every experiment") {
  const std::map<std::string, Json> minimal{
      {"planck", {{"temperature_k", 300}, {"nu_min_hz", 1e12}, {"nu_max_hz", 1e14}}},
      {"mode", {{"nu_min_hz", 1.0}, {"nu_max_hz", 2.0}, {"points", 3}, {"density_j_per_hz", 1.0}}},
      {"detector", Json::object()},
      {"interference", {{"wavelength_m", 5e-7}}},
      {"eckart", {{"molecule", "a.xyz"}, {"reference", "b.xyz"}}},
      {"ilcrs", {{"kappa_m2", 1e-27}, {"z", 0.1}}},
      {"soliton", {{"response", {0, 2, -1}}, {"period_m", 1.0}, {"evanescent_radius_m", 0.1}}},
  };
  for (const auto& [name, params] : minimal) {
    CAPTURE(name);
    const auto r = validate_config_object({{"experiment", name}, {"parameters", params}});
    for (const auto& e : r.errors) MESSAGE(e.message());
    CHECK(r.ok());
    CHECK(r.config->experiment == name);
    CHECK(r.config->trials == 100000);
  }
  CHECK(minimal.size() == registered_experiments().size());
}

TEST_CASE("every violation is reported") {
  const auto r = validate_config(R"({"experiment": "interference", "trials": -3,
                                      "parameters": {"wavelength_m": -1}})");
  CHECK_FALSE(r.ok());
  REQUIRE(r.errors.size() == 2);
  std::set<std::string> fields;
  for (const auto& e : r.errors) fields.insert(e.field);
  CHECK(fields == std::set<std::string>{"trials", "parameters.wavelength_m"});

  const auto unknown = validate_config(R"({"experiment": "interference",
                                           "parameters": {"wavelength_m": 1e-6, "colour": 3}})");
  REQUIRE(unknown.errors.size() == 1);
  CHECK(unknown.errors[0].field == "parameters.colour");

  const auto missing = validate_config(R"({"experiment": "soliton", "parameters": {}})");
  CHECK(missing.errors.size() >= 3);

  const auto bad_name = validate_config(R"({"experiment": "teleport"})");
  REQUIRE(bad_name.errors.size() == 1);
  CHECK(bad_name.errors[0].field == "experiment");
}

TEST_CASE("syntax errors carry a position") {
  const auto r = validate_config("{\n  \"experiment\": \"planck\",\n  \"parameters\": {,}\n}");
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].field == "config");
  CHECK(r.errors[0].constraint.find("line 3") != std::string::npos);
  CHECK(r.errors[0].constraint.find("column") != std::string::npos);
}

TEST_CASE("canonical form round trips") {
  for (const auto& info : registered_experiments()) {
    CAPTURE(info.name);
    const auto cfg = valid(example_config(info.name, "out/x"));
    const std::string text = canonical_config(cfg);
    const auto again = validate_config(text);
    REQUIRE(again.ok());
    CHECK(*again.config == cfg);
    CHECK(canonical_config(*again.config) == text);
  }
}

TEST_CASE("coverage of library operations") {
  const std::map<std::string, std::set<std::string>> expected{
      {"planck", {"planck_mean_energy"}},
      {"mode", {"normalize_mode"}},
      {"detector", {"linearized_response", "photocell_signal"}},
      {"interference", {"mean_coincidence", "visibility"}},
      {"eckart", {"bind_frame", "resolve_permutation", "symmetry_operations"}},
      {"ilcrs", {"redshift_along", "apply_redshift", "calibrate_kappa"}},
      {"soliton", {"find_stable_alpha", "quantized_radii"}},
  };
  std::set<std::string> names;
  for (const auto& info : registered_experiments()) {
    names.insert(info.name);
    CHECK_FALSE(info.summary.empty());
    const std::set<std::string> ops(info.operations.begin(), info.operations.end());
    for (const auto& op : expected.at(info.name)) {
      CAPTURE(op);
      CHECK(ops.count(op) == 1);
    }
  }
  CHECK(names.size() == expected.size());
  CHECK(is_registered("eckart"));
  CHECK_FALSE(is_registered("Eckart"));
}

TEST_CASE("exit code mapping") {
  CHECK(exit_code_for(ErrorKind::no_solution) == ExitCode::runtime);
  CHECK(exit_code_for(ErrorKind::unstable_only) == ExitCode::runtime);
  CHECK(exit_code_for(ErrorKind::frame_not_found) == ExitCode::runtime);
  CHECK(exit_code_for(ErrorKind::invalid_argument) == ExitCode::validation);
  CHECK(exit_code_for(ErrorKind::invalid_calibration) == ExitCode::validation);
  CHECK(exit_code_for(ErrorKind::parse_error) == ExitCode::validation);
}

TEST_CASE("sha256 digests") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("every example config runs") {
  for (const auto& info : registered_experiments()) {
    CAPTURE(info.name);
    const auto dir = scratch("examples_" + info.name);
    auto j = example_config(info.name, dir);
    j["trials"] = 2000;
    const auto manifest = run_experiment(valid(j));
    CHECK(manifest.artifact_version == kArtifactVersion);
    CHECK_FALSE(manifest.outputs.empty());
    CHECK(fs::exists(dir / "manifest.json"));
    for (const auto& f : manifest.outputs) {
      const auto bytes = slurp(dir / f.name);
      CHECK(bytes.size() == f.bytes);
      CHECK(sha256_hex(bytes) == f.sha256);
      CHECK(bytes.find('\n') != std::string::npos);  // header row present
    }
    const auto written = Json::parse(slurp(dir / "manifest.json"));
    CHECK(written["config"] == manifest.config);
    CHECK(written["outputs"].size() == manifest.outputs.size());
  }
}

TEST_CASE("interference run reports unit visibility") {
  const auto dir = scratch("visibility");
  const auto cfg = valid({{"experiment", "interference"},
                          {"parameters", {{"wavelength_m", 6.328e-7}, {"regime", "amplitude"}}},
                          {"master_seed", 42},
                          {"trials", 100000},
                          {"output", dir.string()}});
  const auto manifest = run_experiment(cfg);
  CHECK(manifest.summary["visibility_amplitude"].get<double>() == doctest::Approx(1.0).epsilon(0.02));
  CHECK(fs::exists(dir / "scan_amplitude.csv"));
}

TEST_CASE("runs are reproducible across repeats and worker counts") {
  for (const char* name : {"interference", "planck", "eckart"}) {
    CAPTURE(name);
    auto j = example_config(name, scratch(std::string("repeat_a_") + name));
    j["trials"] = 20000;
    const auto a_dir = scratch(std::string("repeat_a_") + name);
    const auto b_dir = scratch(std::string("repeat_b_") + name);
    auto cfg = valid(j);
    run_experiment(cfg, {1});
    cfg.output = b_dir.string();
    run_experiment(cfg, {4});
    const auto a = csv_outputs(a_dir);
    const auto b = csv_outputs(b_dir);
    CHECK_FALSE(a.empty());
    CHECK(a == b);
  }
}

TEST_CASE("run_experiment error paths") {
  ExperimentConfig bogus;
  bogus.experiment = "teleport";
  CHECK_THROWS_AS(run_experiment(bogus), UsageError);

  ExperimentConfig bad;
  bad.experiment = "interference";
  bad.parameters = {{"wavelength_m", -1.0}};
  bad.output = scratch("bad").string();
  try {
    run_experiment(bad);
    FAIL("expected ValidationFailure");
  } catch (const ValidationFailure& e) {
    REQUIRE(e.errors().size() == 1);
    CHECK(e.errors()[0].field == "parameters.wavelength_m");
  }

  const auto cfg = valid({{"experiment", "soliton"},
                          {"parameters", {{"response", {0, 0.5}}, {"period_m", 1.0},
                                          {"evanescent_radius_m", 0.1}}},
                          {"output", scratch("noroot").string()}});
  try {
    run_experiment(cfg);
    FAIL("expected NoSolution");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::no_solution);
  }
}

TEST_CASE("command line exit codes") {
  const auto dir = scratch("cli");
  fs::create_directories(dir);

  CHECK(run_cli("planck --param temperature_k=300 --param nu_min_hz=1e12 --param nu_max_hz=1e14 --out " +
                (dir / "planck").string()) == 0);
  CHECK(fs::exists(dir / "planck" / "manifest.json"));

  CHECK(run_cli("") == 2);
  CHECK(run_cli("teleport") == 2);
  CHECK(run_cli("planck --bogus-flag") == 2);
  CHECK(run_cli("planck --config " + (dir / "missing.json").string()) == 2);

  {
    std::ofstream f(dir / "negative.json");
    f << R"({"experiment": "interference", "trials": -5, "parameters": {"wavelength_m": 5e-7}})";
  }
  CHECK(run_cli("interference --config " + (dir / "negative.json").string()) == 3);
  const std::string log = (dir / "negative.log").string();
  const int status = std::system((std::string(SEDSIM_CLI_PATH) + " interference --config " + (dir / "negative.json").string() +
               " 2>" + log + " >/dev/null")
                  .c_str());
  CHECK(WEXITSTATUS(status) == 3);
  CHECK(slurp(log).find("trials") != std::string::npos);

  CHECK(run_cli("interference --config " + (dir / "negative.json").string() + " --trials 100 --check") == 0);
  CHECK(run_cli("soliton --config " + (dir / "negative.json").string()) == 2);

  CHECK(run_cli("soliton --param response=[0,0.5] --param period_m=1 --param evanescent_radius_m=0.1 --out " +
                (dir / "soliton").string()) == 4);
  CHECK(run_cli("soliton --param response=[0,0,1] --param period_m=1 --param evanescent_radius_m=0.1 --out " +
                (dir / "soliton").string()) == 4);
  CHECK(run_cli("ilcrs --calibrate-density 20 --calibrate-rate 2.3e-26 --z 0.1 --out " + (dir / "ilcrs").string()) == 0);
  CHECK(run_cli("ilcrs --calibrate-density -20 --calibrate-rate 2.3e-26 --z 0.1 --out " + (dir / "ilcrs").string()) == 3);
}
