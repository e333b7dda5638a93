#include "sedsim/harness.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <fstream>

#include "schema.hpp"

namespace sedsim::harness {

namespace {

using Runner = detail::ExperimentResult (*)(const ExperimentConfig&, const RunOptions&);

Runner runner_for(const std::string& name) {
  if (name == "planck") return detail::run_planck;
  if (name == "mode") return detail::run_mode;
  if (name == "detector") return detail::run_detector;
  if (name == "interference") return detail::run_interference;
  if (name == "eckart") return detail::run_eckart;
  if (name == "ilcrs") return detail::run_ilcrs;
  if (name == "soliton") return detail::run_soliton;
  return nullptr;
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

ExitCode exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::frame_not_found:
    case ErrorKind::no_solution:
    case ErrorKind::unstable_only:
    case ErrorKind::undefined_visibility:
    case ErrorKind::grid_mismatch:
      return ExitCode::runtime;
    default:
      return ExitCode::validation;
  }
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

Json RunManifest::to_json() const {
  Json files = Json::array();
  for (const auto& f : outputs) {
    files.push_back({{"file", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  }
  return Json{{"artifact_version", artifact_version},
              {"config", config},
              {"duration_s", duration_s},
              {"outputs", files},
              {"summary", summary}};
}

RunManifest run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  const Runner runner = runner_for(config.experiment);
  if (!runner) throw UsageError("unknown experiment '" + config.experiment + "'");

  // Accept configs built in code as long as they survive validation.
  const auto checked = validate_config_object(config.to_json());
  if (!checked.ok()) throw ValidationFailure(checked.errors);

  const auto start = std::chrono::steady_clock::now();
  auto result = runner(*checked.config, options);
  const auto stop = std::chrono::steady_clock::now();

  const std::filesystem::path dir(checked.config->output);
  std::filesystem::create_directories(dir);
  RunManifest manifest;
  manifest.config = checked.config->to_json();
  manifest.artifact_version = std::string(kArtifactVersion);
  manifest.duration_s = std::chrono::duration<double>(stop - start).count();
  manifest.summary = std::move(result.summary);
  for (const auto& [name, contents] : result.files) {
    write_file(dir / name, contents);
    manifest.outputs.push_back({name, sha256_hex(contents), contents.size()});
  }
  write_file(dir / "manifest.json", manifest.to_json().dump(2) + "\n");
  return manifest;
}

}  // namespace sedsim::harness
