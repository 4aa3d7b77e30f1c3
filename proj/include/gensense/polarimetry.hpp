// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gensense/control_space.hpp>
#include <gensense/fabric.hpp>
#include <gensense/fmcw.hpp>
#include <gensense/imaging.hpp>
#include <gensense/scene.hpp>
#include <gensense/scheduler.hpp>

#include <array>
#include <stdexcept>
#include <vector>

namespace gensense {

/// Everything needed to turn a trajectory into range profiles.
template <typename Scalar>
struct AcquisitionSetup {
  FabricGeometry geometry;
  SubbandPlan plan;
  Scalar sample_rate_hz = 0;
  int pad_factor = 4;
  Scalar c_mps = Scalar(kSpeedOfLight);
  NoiseConfig noise;

  ChirpConfig<Scalar> chirp_for(const ControlPoint& u) const {
    return make_chirp<Scalar>(Scalar(u.f.center_hz), Scalar(u.f.chirp_bandwidth_hz),
                              Scalar(u.s.chirp_duration_s), sample_rate_hz);
  }
};

/// Both receive polarizations are captured on every chirp.
inline constexpr std::array<Pol, 2> kReceivePols{Pol::H, Pol::V};

/// Beat signals for every trajectory point, rx H then rx V per point.
template <typename Scalar>
std::vector<BeatSignal<Scalar>> simulate_trajectory(const Trajectory& traj, const Scene<Scalar>& scene,
                                                    const AcquisitionSetup<Scalar>& setup) {
  std::vector<BeatSignal<Scalar>> out;
  out.reserve(traj.points.size() * kReceivePols.size());
  for (const auto& u : traj.points) {
    const auto chirp = setup.chirp_for(u);
    for (Pol rx : kReceivePols)
      out.push_back(simulate_state(u, scene, chirp, setup.noise, rx, setup.c_mps));
  }
  return out;
}

/// Four channels of N_vir range profiles, indexed by channel_index(tx, rx).
template <typename Scalar>
struct PolFrame {
  std::array<std::vector<ElementProfile<Scalar>>, 4> channels;
  int slot_span = 0;
  AcquisitionSetup<Scalar> setup;
  bool spreading_loss = false;

  const std::vector<ElementProfile<Scalar>>& channel(Pol tx, Pol rx) const {
    return channels[channel_index(tx, rx)];
  }
};

/// Number of real-pair world-model unknowns: four channels per element.
inline int dof_count(int n_vir) {
  if (n_vir < 1) throw std::invalid_argument("n_vir must be >= 1");
  return 4 * n_vir;
}

/// Runs an arbitrary validated schedule and sorts range profiles into channels.
template <typename Scalar>
PolFrame<Scalar> acquire(const Schedule& sched, const Scene<Scalar>& scene,
                         const AcquisitionSetup<Scalar>& setup) {
  const auto verdict = validate_schedule(sched, setup.plan, setup.geometry.config);
  if (!verdict) throw std::invalid_argument("invalid schedule: " + verdict.describe());
  const Trajectory traj = trajectory_from_schedule(sched, setup.geometry, setup.plan);

  PolFrame<Scalar> frame;
  frame.setup = setup;
  frame.slot_span = sched.n_slots;
  frame.spreading_loss = scene.spreading_loss;
  for (const auto& u : traj.points) {
    const auto chirp = setup.chirp_for(u);
    const auto element = map_state_to_element(u.q.chain_id, u.q.module_id,
                                              u.f.index % setup.geometry.config.p_steps,
                                              setup.geometry, setup.plan);
    for (Pol rx : kReceivePols) {
      const auto sig = simulate_state(u, scene, chirp, setup.noise, rx, setup.c_mps);
      frame.channels[channel_index(u.s.pol_tx, rx)].push_back(
          {element, range_profile(sig, setup.pad_factor, setup.c_mps)});
    }
  }
  return frame;
}

/// Dual-pol acquisition: one H-transmit frame followed by one V-transmit frame.
template <typename Scalar>
PolFrame<Scalar> acquire_pol_frame(const Scene<Scalar>& scene, const AcquisitionSetup<Scalar>& setup) {
  return acquire(build_schedule(setup.geometry.config, {Pol::H, Pol::V}), scene, setup);
}

/// Noiseless single-channel acquisition of a unit scatterer at `location`.
template <typename Scalar>
PolFrame<Scalar> calibration_frame(const PolFrame<Scalar>& frame, const Vec3d& location) {
  Scene<Scalar> unit;
  unit.spreading_loss = frame.spreading_loss;
  unit.scatterers.push_back({location.template cast<Scalar>(), ScatteringMatrix<Scalar>::Identity()});
  AcquisitionSetup<Scalar> setup = frame.setup;
  setup.noise = NoiseConfig{};
  return acquire(build_schedule(setup.geometry.config, {Pol::H}), unit, setup);
}

/// Noiseless back-projected response of a unit scatterer placed at `location`.
template <typename Scalar>
std::complex<Scalar> unit_response(const PolFrame<Scalar>& frame, const Vec3d& location) {
  const auto cal = calibration_frame(frame, location);
  return backproject_point(cal.channel(Pol::H, Pol::H), location, frame.setup.c_mps);
}

struct CoherentGain {
  double total = 0.0;
  double single_element_mean = 0.0;
  int n_elements = 0;

  /// |coherent sum| / (N * mean single-element magnitude); 1 is ideal.
  double ratio() const { return total / (n_elements * single_element_mean); }
};

/// Coherent gain of a unit scatterer at `location` relative to the
/// single-element back-projected magnitude.
template <typename Scalar>
CoherentGain coherent_gain(const PolFrame<Scalar>& frame, const Vec3d& location) {
  const auto cal = calibration_frame(frame, location);
  const auto& profiles = cal.channel(Pol::H, Pol::H);
  CoherentGain g;
  g.n_elements = static_cast<int>(profiles.size());
  g.total = std::abs(backproject_point(profiles, location, frame.setup.c_mps));
  for (const auto& ep : profiles)
    g.single_element_mean += std::abs(backproject_point(std::vector{ep}, location, frame.setup.c_mps));
  g.single_element_mean /= g.n_elements;
  return g;
}

/// Estimates S at a location by back-projecting every channel there and
/// normalizing by the unit-scatterer calibration response.
/// Throws ModelError when the location lies outside the range support.
template <typename Scalar>
ScatteringMatrix<Scalar> estimate_scattering(const PolFrame<Scalar>& frame, const Vec3d& location) {
  for (const auto& ch : frame.channels) {
    if (ch.empty()) throw std::invalid_argument("polarimetric frame is missing a channel");
  }
  const Scalar support = frame.channels.front().front().profile.max_range();
  for (const auto& ep : frame.channels.front()) {
    if ((location - ep.element.position).norm() > double(support))
      throw ModelError("location outside imaging support");
  }
  const std::complex<Scalar> gain = unit_response(frame, location);
  if (std::abs(gain) == Scalar(0)) throw ModelError("zero calibration response at location");

  ScatteringMatrix<Scalar> s;
  for (Pol tx : {Pol::H, Pol::V}) {
    for (Pol rx : {Pol::H, Pol::V})
      s(index_of(rx), index_of(tx)) =
          backproject_point(frame.channel(tx, rx), location, frame.setup.c_mps) / gain;
  }
  return s;
}

/// Back-projects all four channels onto one grid.
template <typename Scalar>
ImageGrid<Scalar> image_pol_frame(const PolFrame<Scalar>& frame, const ImageGridSpec& spec) {
  ImageGrid<Scalar> grid;
  grid.spec = spec;
  for (int ch = 0; ch < 4; ++ch)
    grid.channels[ch] = backproject(frame.channels[ch], spec, frame.setup.c_mps);
  return grid;
}

template <typename Scalar>
struct ScattererEstimate {
  Vec3d location = Vec3d::Zero();
  ScatteringMatrix<Scalar> s = ScatteringMatrix<Scalar>::Zero();
};

/// One persistent world-model update: S estimates at localized scatterers
/// plus the four-channel image they were read from.
template <typename Scalar>
struct WorldModelFrame {
  std::vector<ScattererEstimate<Scalar>> estimates;
  ImageGrid<Scalar> image;
  int dof_count = 0;
  int timestamp_slots = 0;
};

template <typename Scalar>
WorldModelFrame<Scalar> build_world_model(const PolFrame<Scalar>& frame, ImageGrid<Scalar> image,
                                          const std::vector<Vec3d>& locations) {
  WorldModelFrame<Scalar> wm;
  wm.image = std::move(image);
  wm.dof_count = dof_count(static_cast<int>(frame.channels.front().size()));
  wm.timestamp_slots = frame.slot_span;
  for (const auto& loc : locations) wm.estimates.push_back({loc, estimate_scattering(frame, loc)});
  return wm;
}

/// Frobenius-norm relative error ||est - truth|| / ||truth||.
template <typename Scalar>
Scalar relative_error(const ScatteringMatrix<Scalar>& est, const ScatteringMatrix<Scalar>& truth) {
  return (est - truth).norm() / truth.norm();
}

}  // namespace gensense
