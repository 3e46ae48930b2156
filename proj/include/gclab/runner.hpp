#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gclab/experiments.hpp"
#include "gclab/io.hpp"

namespace gclab {

inline constexpr const char* kVersion = "0.1.0";

/// Deterministic key=value snapshot of a resolved configuration.
std::string config_snapshot(const ExperimentConfig& config);

struct RunOutcome {
  std::vector<std::filesystem::path> files;  // result files, manifest last
  RunManifest manifest;
};

/// Runs the configured study, writes its result files plus run_manifest.json
/// into out_dir (created if missing), and returns what was written.
RunOutcome run_study(const ExperimentConfig& config,
                     const std::filesystem::path& out_dir);

}  // namespace gclab
