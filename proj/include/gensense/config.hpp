// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gensense/fabric.hpp>
#include <gensense/fmcw.hpp>
#include <gensense/imaging.hpp>
#include <gensense/polarimetry.hpp>
#include <gensense/scene.hpp>

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace gensense {

/// Parse failure or one-or-more constraint violations, each tagged with its
/// field path (e.g. "fabric.chirp_bandwidth_hz: must be > 0").
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

struct ScenarioConfig {
  std::string name;
  std::uint64_t seed = 0;
  double c_mps = kSpeedOfLight;
  FabricGeometry geometry;
  std::vector<Pol> pol_states{Pol::H, Pol::V};
  double sample_rate_hz = 0.0;
  int pad_factor = 4;
  NoiseConfig noise;
  ImageGridSpec grid;
  Scened scene;
  /// Normalized form of the input; the config hash is taken over its dump.
  nlohmann::json canonical;

  const FabricConfig& fabric() const { return geometry.config; }
  AcquisitionSetup<double> acquisition_setup() const;
  /// Unambiguous range of one chirp's padded range profile.
  double range_support_m() const;
  /// 16 hex digits of FNV-1a over the canonical JSON.
  std::string hash() const;
};

ScenarioConfig parse_config(const nlohmann::json& doc);
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Returns a copy with the seed replaced (canonical form and hash follow).
ScenarioConfig with_seed(const ScenarioConfig& cfg, std::uint64_t seed);

/// The built-in case-study scenario as JSON text (identical to the bundled
/// configs/case_study_v.json).
const std::string& case_study_json();
ScenarioConfig case_study_config();

std::string fnv1a_hex(std::string_view bytes);

}  // namespace gensense
