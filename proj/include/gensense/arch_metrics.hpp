// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace gensense::arch {

struct PhasedArray {
  int n_elements = 64;
};

struct TdmMimo {
  int n_tx = 8;
  int n_rx = 8;
};

struct MrcFaaCaf {
  int k = 2;
  int m = 4;
  int p = 8;
};

using Variant = std::variant<PhasedArray, TdmMimo, MrcFaaCaf>;

struct ArchSpec {
  Variant variant;
  /// Transmit polarization states per world-model frame (2 for full polarimetry).
  int pol_tx_states = 2;
};

enum class Ordinal { Low, LowModerate, Moderate, ModerateHigh, High };

std::string_view to_string(Ordinal o);

/// Fixed qualitative ratings, each with its stated reason. These are not
/// derived from the model.
struct OrdinalRatings {
  Ordinal energy;
  std::string energy_note;
  Ordinal hardware_calibration;
  std::string hardware_calibration_note;
  Ordinal deployment_flexibility;
  std::string deployment_flexibility_note;
  Ordinal persistence_suitability;
};

/// World-model update rate expressed as 1 / (t0_multiple * T0).
struct UpdateRate {
  int t0_multiple = 1;

  std::string str() const { return "1/(" + std::to_string(t0_multiple) + "T0)"; }
  friend bool operator==(const UpdateRate&, const UpdateRate&) = default;
};

struct ArchMetrics {
  std::string name;
  std::string virtual_elements_label;
  int virtual_elements = 0;
  int pol_channels_per_element = 4;
  int frame_multiplier = 0;
  UpdateRate update_rate;
  int absolute_chirps_per_frame = 0;
  OrdinalRatings ratings;
};

std::string name_of(const ArchSpec& a);
int virtual_elements(const ArchSpec& a);
int frame_multiplier(const ArchSpec& a);
UpdateRate update_rate(const ArchSpec& a);
/// Raw chirps per full-polarimetric frame, assuming one chirp per sensing
/// state, all receivers active on every chirp, and the K chains of the fabric
/// running concurrently.
int absolute_chirps_per_frame(const ArchSpec& a);
OrdinalRatings ordinal_ratings(const ArchSpec& a);

ArchMetrics metrics(const ArchSpec& a);
std::vector<ArchMetrics> compare(const std::vector<ArchSpec>& specs);

/// Phased array (64), TDM-MIMO (8x8) and the K=2, M=4, P=8 fabric, all dual-pol.
std::vector<ArchSpec> case_study_specs();

std::string render_text(const std::vector<ArchMetrics>& table);
std::string render_csv(const std::vector<ArchMetrics>& table);

}  // namespace gensense::arch
