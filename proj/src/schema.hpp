#pragma once

// Parameter schemas for the registered experiments. Internal to the harness.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sedsim/harness.hpp"

namespace sedsim::harness::detail {

enum class Kind { number, integer, string, boolean, number_array };

using Check = std::function<std::optional<std::string>(const Json&)>;

struct ParamSpec {
  std::string name;
  Kind kind;
  bool required = false;
  Json default_value = nullptr;  // null: optional and left absent
  Check check = nullptr;
};

struct ExperimentSchema {
  ExperimentInfo info;
  std::vector<ParamSpec> params;
  // Constraints spanning several parameters; appends to errors.
  std::function<void(const Json& params, std::vector<ConfigError>& errors)> cross_check = nullptr;
};

const std::map<std::string, ExperimentSchema>& schemas();

using Outputs = std::map<std::string, std::string>;  // file name -> contents

struct ExperimentResult {
  Outputs files;
  Json summary = Json::object();
};

ExperimentResult run_planck(const ExperimentConfig& config, const RunOptions& options);
ExperimentResult run_mode(const ExperimentConfig& config, const RunOptions& options);
ExperimentResult run_detector(const ExperimentConfig& config, const RunOptions& options);
ExperimentResult run_interference(const ExperimentConfig& config, const RunOptions& options);
ExperimentResult run_eckart(const ExperimentConfig& config, const RunOptions& options);
ExperimentResult run_ilcrs(const ExperimentConfig& config, const RunOptions& options);
ExperimentResult run_soliton(const ExperimentConfig& config, const RunOptions& options);

}  // namespace sedsim::harness::detail
