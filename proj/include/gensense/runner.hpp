// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gensense/config.hpp>

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace gensense {

struct RunOptions {
  std::optional<std::filesystem::path> config_path;
  /// Only "case-study" is defined.
  std::optional<std::string> preset;
  std::filesystem::path out_dir = "runs";
  std::optional<std::uint64_t> seed;
  bool debug_signals = false;
};

struct RunResult {
  std::filesystem::path run_dir;
  /// Files written, relative to run_dir, sorted.
  std::vector<std::string> files;
  nlohmann::json summary;
};

/// Loads --config, or the named preset, then applies --seed.
ScenarioConfig resolve_config(const RunOptions& opts);

// Each subcommand writes into a staging directory that is renamed to
// <out>/<config-hash>-<UTC timestamp> on success and removed on failure.
RunResult run_compare(const RunOptions& opts);
RunResult run_schedule(const RunOptions& opts);
RunResult run_simulate(const RunOptions& opts);
RunResult run_reconstruct(const RunOptions& opts);

}  // namespace gensense
