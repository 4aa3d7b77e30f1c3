// SPDX-License-Identifier: Apache-2.0
#include <gensense/fabric.hpp>

#include <cmath>
#include <stdexcept>

namespace gensense {

std::vector<std::string> FabricConfig::check() const {
  std::vector<std::string> errors;
  if (k_chains < 1) errors.emplace_back("k_chains: must be >= 1");
  if (m_modules < 1) errors.emplace_back("m_modules: must be >= 1");
  if (p_steps < 1) errors.emplace_back("p_steps: must be >= 1");
  if (!std::isfinite(band_lo_hz) || band_lo_hz <= 0.0) errors.emplace_back("band_lo_hz: must be > 0");
  if (!std::isfinite(band_hi_hz) || !(band_hi_hz > band_lo_hz))
    errors.emplace_back("band_hi_hz: must exceed band_lo_hz");
  if (!std::isfinite(chirp_bandwidth_hz) || chirp_bandwidth_hz <= 0.0)
    errors.emplace_back("chirp_bandwidth_hz: must be > 0");
  if (!std::isfinite(chirp_duration_s) || chirp_duration_s <= 0.0)
    errors.emplace_back("chirp_duration_s: must be > 0");
  if (declared_n_vir && errors.empty() && *declared_n_vir != n_vir())
    errors.emplace_back("n_vir: declared " + std::to_string(*declared_n_vir) + " but K*M*P = " +
                        std::to_string(n_vir()));
  if (errors.empty() && chirp_bandwidth_hz > step_width_hz())
    errors.emplace_back("chirp_bandwidth_hz: chirp does not fit subband step (" +
                        std::to_string(chirp_bandwidth_hz) + " Hz > " +
                        std::to_string(step_width_hz()) + " Hz)");
  return errors;
}

int FabricGeometry::element_index(int chain, int module, int step) const {
  if (chain < 0 || chain >= config.k_chains) throw std::out_of_range("chain index out of range");
  if (module < 0 || module >= config.m_modules) throw std::out_of_range("module index out of range");
  if (step < 0 || step >= config.p_steps) throw std::out_of_range("step index out of range");
  return (chain * config.m_modules + module) * config.p_steps + step;
}

Vec3d FabricGeometry::element_position(int v) const {
  if (v < 0 || v >= config.n_vir()) throw std::out_of_range("virtual element index out of range");
  return aperture.origin + (v * aperture.spacing_m) * aperture.direction.normalized();
}

Vec3d FabricGeometry::aperture_center() const {
  return aperture.origin + (0.5 * aperture_length()) * aperture.direction.normalized();
}

ApertureGeometry centered_aperture(const Vec3d& center, const Vec3d& direction, double spacing_m,
                                   int n_elements) {
  const Vec3d axis = direction.normalized();
  return {center - (0.5 * (n_elements - 1) * spacing_m) * axis, axis, spacing_m};
}

}  // namespace gensense
