// SPDX-License-Identifier: Apache-2.0
#include <gensense/control_space.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gensense {

std::optional<std::string> validate_point(const ControlPoint& u, const ControlSpaceBounds& bounds) {
  if (u.q.chain_id < 0 || u.q.chain_id >= bounds.k_chains) return "chain_id out of range";
  if (u.q.module_id < 0 || u.q.module_id >= bounds.m_modules) return "module_id out of range";
  const int n_vir = bounds.k_chains * bounds.m_modules * bounds.p_steps;
  if (u.f.index < 0 || u.f.index >= n_vir) return "frequency index out of range";
  if (u.f.index / bounds.p_steps != u.q.chain_id * bounds.m_modules + u.q.module_id)
    return "frequency index inconsistent with chain/module";
  if (!std::isfinite(u.f.center_hz) || u.f.center_hz <= 0.0) return "center frequency not positive";
  if (!std::isfinite(u.f.chirp_bandwidth_hz) || u.f.chirp_bandwidth_hz <= 0.0)
    return "chirp bandwidth not positive";
  if (u.f.center_hz - 0.5 * u.f.chirp_bandwidth_hz < bounds.band_lo_hz ||
      u.f.center_hz + 0.5 * u.f.chirp_bandwidth_hz > bounds.band_hi_hz)
    return "band overflow";
  if (!u.q.element_position.allFinite()) return "element position not finite";
  if (!std::isfinite(u.s.chirp_duration_s) || u.s.chirp_duration_s <= 0.0)
    return "chirp duration not positive";
  if (u.s.slot_index < 0) return "slot index negative";
  return std::nullopt;
}

Trajectory trajectory_from_schedule(const Schedule& sched, const FabricGeometry& geometry,
                                    const SubbandPlan& plan) {
  const auto& cfg = geometry.config;
  std::vector<ScheduleEntry> entries = sched.entries;
  std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return a.slot != b.slot ? a.slot < b.slot : a.chain < b.chain;
  });

  Trajectory traj;
  traj.points.reserve(entries.size());
  for (const auto& e : entries) {
    if (e.chain < 0 || e.chain >= cfg.k_chains || e.module < 0 || e.module >= cfg.m_modules ||
        e.step < 0 || e.step >= cfg.p_steps || !plan.contains(e.chain, e.module, e.step))
      throw std::invalid_argument("schedule references module absent from geometry (chain " +
                                  std::to_string(e.chain) + ", module " +
                                  std::to_string(e.module) + ", step " +
                                  std::to_string(e.step) + ")");
    const int v = geometry.element_index(e.chain, e.module, e.step);
    ControlPoint u;
    u.f = {v, plan.center_hz(e.chain, e.module, e.step), plan.chirp_bandwidth_hz()};
    u.q = {e.chain, e.module, geometry.element_position(v)};
    u.s = {cfg.chirp_duration_s, e.pol_tx, e.slot};
    traj.points.push_back(u);
  }
  return traj;
}

Trajectory trajectory_from_schedule(const Schedule& sched, const FabricGeometry& geometry) {
  return trajectory_from_schedule(sched, geometry, partition_band(geometry.config));
}

Schedule schedule_from_trajectory(const Trajectory& traj, const FabricConfig& cfg) {
  Schedule sched;
  sched.entries.reserve(traj.points.size());
  for (const auto& u : traj.points) {
    sched.entries.push_back(
        {u.s.slot_index, u.q.chain_id, u.q.module_id, u.f.index % cfg.p_steps, u.s.pol_tx});
    sched.n_slots = std::max(sched.n_slots, u.s.slot_index + 1);
  }
  return sched;
}

}  // namespace gensense
