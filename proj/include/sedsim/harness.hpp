#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sedsim/error.hpp"

namespace sedsim::harness {

using Json = nlohmann::json;

inline constexpr std::string_view kArtifactVersion = "1.0.0";

// Exit codes shared by the CLI and run_experiment callers.
enum class ExitCode : int { success = 0, usage = 2, validation = 3, runtime = 4 };

// Model errors that mean the inputs broke a precondition map to validation;
// the rest (no root, frame not found, ...) are runtime failures.
ExitCode exit_code_for(ErrorKind kind);

struct ExperimentConfig {
  std::string experiment;
  Json parameters = Json::object();  // defaults filled in by validation
  std::uint64_t master_seed = 0;
  std::uint64_t trials = 1;
  std::string output = "out";

  Json to_json() const;
  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct ConfigError {
  std::string field;       // dotted path, e.g. "parameters.wavelength_m"
  std::string constraint;  // human-readable rule that failed

  std::string message() const { return field + ": " + constraint; }
};

struct ValidationResult {
  std::optional<ExperimentConfig> config;
  std::vector<ConfigError> errors;

  bool ok() const { return config.has_value(); }
};

// Parses and checks a JSON config. Every violation is reported (no fail-fast);
// a JSON syntax error yields a single "config" error carrying line and column.
ValidationResult validate_config(std::string_view raw);
ValidationResult validate_config_object(const Json& raw);

// Sorted-key JSON with defaults made explicit; re-validating it gives back an
// equal config.
std::string canonical_config(const ExperimentConfig& config);

struct ExperimentInfo {
  std::string name;
  std::string summary;
  std::vector<std::string> operations;  // library operations the run exercises
};

const std::vector<ExperimentInfo>& registered_experiments();
bool is_registered(std::string_view name);

struct OutputFile {
  std::string name;
  std::string sha256;
  std::size_t bytes;
};

struct RunManifest {
  Json config;
  std::string artifact_version;
  double duration_s = 0.0;
  std::vector<OutputFile> outputs;
  // Headline numbers (e.g. visibility) for quick inspection.
  Json summary = Json::object();

  Json to_json() const;
};

struct RunOptions {
  unsigned workers = 1;  // Monte-Carlo parallelism; 0 = hardware concurrency
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when a config fails validation; carries every violation.
class ValidationFailure : public std::runtime_error {
 public:
  explicit ValidationFailure(std::vector<ConfigError> errors);
  const std::vector<ConfigError>& errors() const { return errors_; }

 private:
  std::vector<ConfigError> errors_;
};

// Dispatches to the named experiment, writes CSV outputs plus manifest.json into
// config.output and returns the manifest. Unknown experiment -> UsageError;
// invalid parameters -> ValidationFailure; model failures -> sedsim::Error.
RunManifest run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

std::string sha256_hex(std::string_view bytes);

}  // namespace sedsim::harness
