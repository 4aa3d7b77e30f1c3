// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gensense/types.hpp>

#include <optional>
#include <string>
#include <vector>

namespace gensense {

/// Multi-trunk fabric dimensions and the shared band/chirp budget.
///
/// K RF chains each drive one trunk carrying M clip-on modules; every module
/// exposes P frequency-indexed probing states. The K*M modules split the
/// system band into equal contiguous subbands.
struct FabricConfig {
  int k_chains = 1;
  int m_modules = 1;
  int p_steps = 1;
  double band_lo_hz = 0.0;
  double band_hi_hz = 0.0;
  double chirp_bandwidth_hz = 0.0;
  double chirp_duration_s = 0.0;
  /// Declared virtual-element count; when set it must equal K*M*P.
  std::optional<int> declared_n_vir;

  int n_vir() const { return k_chains * m_modules * p_steps; }
  int n_subbands() const { return k_chains * m_modules; }
  double bandwidth_hz() const { return band_hi_hz - band_lo_hz; }
  double center_hz() const { return 0.5 * (band_lo_hz + band_hi_hz); }
  double subband_width_hz() const { return bandwidth_hz() / n_subbands(); }
  double step_width_hz() const { return subband_width_hz() / p_steps; }

  /// All invariant violations, each prefixed by the offending field name.
  std::vector<std::string> check() const;
};

/// Static linear aperture: element v sits at origin + v * spacing * direction.
struct ApertureGeometry {
  Vec3d origin = Vec3d::Zero();
  Vec3d direction = Vec3d::UnitX();
  double spacing_m = 0.0;
};

struct FabricGeometry {
  FabricConfig config;
  ApertureGeometry aperture;

  /// Chain-major, module, then step ordering of virtual elements.
  int element_index(int chain, int module, int step) const;
  Vec3d element_position(int v) const;
  Vec3d aperture_center() const;
  double aperture_length() const { return (config.n_vir() - 1) * aperture.spacing_m; }
};

inline double wavelength(double frequency_hz, double c_mps) { return c_mps / frequency_hz; }

/// Aperture of n_elements at spacing d whose midpoint is `center`.
ApertureGeometry centered_aperture(const Vec3d& center, const Vec3d& direction, double spacing_m,
                                   int n_elements);

}  // namespace gensense
