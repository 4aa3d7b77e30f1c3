// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gensense/polarimetry.hpp>

namespace gensense::test {

inline FabricConfig case_study_fabric() {
  FabricConfig c;
  c.k_chains = 2;
  c.m_modules = 4;
  c.p_steps = 8;
  c.band_lo_hz = 60e9;
  c.band_hi_hz = 81e9;
  c.chirp_bandwidth_hz = 300e6;
  c.chirp_duration_s = 100e-6;
  return c;
}

/// Case-study acquisition: 64 elements at half the center wavelength,
/// aperture centered on the origin along +x, looking down +z.
inline AcquisitionSetup<double> case_study_setup(double c_mps = 3e8, NoiseConfig noise = {}) {
  AcquisitionSetup<double> s;
  s.geometry.config = case_study_fabric();
  const double d = wavelength(s.geometry.config.center_hz(), c_mps) / 2;
  s.geometry.aperture = centered_aperture(Vec3d::Zero(), Vec3d::UnitX(), d, s.geometry.config.n_vir());
  s.plan = partition_band(s.geometry.config);
  s.sample_rate_hz = 2e6;
  s.pad_factor = 4;
  s.c_mps = c_mps;
  s.noise = noise;
  return s;
}

inline Scened point_scene(const Vec3d& p, const ScatteringMatrixd& s = ScatteringMatrixd::Identity()) {
  Scened scene;
  scene.scatterers.push_back({p, s});
  return scene;
}

/// One HH profile per virtual element, simulated directly without a schedule.
inline std::vector<ElementProfile<double>> element_profiles(const AcquisitionSetup<double>& setup,
                                                            const Scened& scene,
                                                            Pol tx = Pol::H, Pol rx = Pol::H) {
  const auto& cfg = setup.geometry.config;
  std::vector<ElementProfile<double>> out;
  for (int k = 0; k < cfg.k_chains; ++k)
    for (int m = 0; m < cfg.m_modules; ++m)
      for (int p = 0; p < cfg.p_steps; ++p) {
        const auto el = map_state_to_element(k, m, p, setup.geometry, setup.plan);
        ControlPoint u;
        u.f = {el.index, el.carrier_hz, cfg.chirp_bandwidth_hz};
        u.q = {k, m, el.position};
        u.s = {cfg.chirp_duration_s, tx, 0};
        const auto sig = simulate_state(u, scene, setup.chirp_for(u), setup.noise, rx, setup.c_mps);
        out.push_back({el, range_profile(sig, setup.pad_factor, setup.c_mps)});
      }
  return out;
}

}  // namespace gensense::test
