// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gensense/fabric.hpp>
#include <gensense/scheduler.hpp>
#include <gensense/types.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gensense {

/// Frequency coordinate of a sensing action. `index` is the global
/// center-frequency index, equal to the virtual element index it drives.
struct FrequencyState {
  int index = 0;
  double center_hz = 0.0;
  double chirp_bandwidth_hz = 0.0;
};

/// Aperture coordinate: which trunk/module radiates and where.
struct ApertureState {
  int chain_id = 0;
  int module_id = 0;
  Vec3d element_position = Vec3d::Zero();
};

struct WaveformState {
  double chirp_duration_s = 0.0;
  Pol pol_tx = Pol::H;
  int slot_index = 0;
};

/// One sensing action u = (f, q, s).
struct ControlPoint {
  FrequencyState f;
  ApertureState q;
  WaveformState s;

  /// Discrete coordinates (frequency index, chain, module, pol, slot). These
  /// fully identify the action independent of scene size or element count.
  std::array<std::int64_t, 5> coordinates() const {
    return {f.index, q.chain_id, q.module_id, index_of(s.pol_tx), s.slot_index};
  }
};

struct Trajectory {
  std::vector<ControlPoint> points;
};

struct ControlSpaceBounds {
  int k_chains = 1;
  int m_modules = 1;
  int p_steps = 1;
  double band_lo_hz = 0.0;
  double band_hi_hz = 0.0;

  static ControlSpaceBounds from(const FabricConfig& cfg) {
    return {cfg.k_chains, cfg.m_modules, cfg.p_steps, cfg.band_lo_hz, cfg.band_hi_hz};
  }
};

/// Empty when valid; otherwise the first violated constraint.
std::optional<std::string> validate_point(const ControlPoint& u, const ControlSpaceBounds& bounds);

/// One control point per schedule entry, ordered by slot then chain.
/// Throws std::invalid_argument when an entry references a module or step the
/// geometry does not have.
Trajectory trajectory_from_schedule(const Schedule& sched, const FabricGeometry& geometry,
                                    const SubbandPlan& plan);

Trajectory trajectory_from_schedule(const Schedule& sched, const FabricGeometry& geometry);

/// Inverse of trajectory_from_schedule: regroups control points into schedule entries.
Schedule schedule_from_trajectory(const Trajectory& traj, const FabricConfig& cfg);

}  // namespace gensense
