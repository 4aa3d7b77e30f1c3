// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gensense/fabric.hpp>
#include <gensense/types.hpp>

#include <string>
#include <vector>

namespace gensense {

struct Band {
  double lo_hz = 0.0;
  double hi_hz = 0.0;

  double width() const { return hi_hz - lo_hz; }
  double center() const { return 0.5 * (lo_hz + hi_hz); }
  /// Open-interval overlap; bands that merely touch are disjoint.
  bool overlaps(const Band& other) const { return lo_hz < other.hi_hz && other.lo_hz < hi_hz; }
};

/// Static equal-width partition of the system band over (chain, module)
/// subbands, with P chirp centers per subband.
class SubbandPlan {
 public:
  SubbandPlan() = default;
  SubbandPlan(int k_chains, int m_modules, int p_steps, double chirp_bandwidth_hz,
              std::vector<Band> subbands, std::vector<double> centers);

  int k_chains() const { return k_; }
  int m_modules() const { return m_; }
  int p_steps() const { return p_; }
  double chirp_bandwidth_hz() const { return chirp_bw_; }

  const Band& subband(int chain, int module) const;
  double center_hz(int chain, int module, int step) const;
  Band chirp_band(int chain, int module, int step) const;
  bool contains(int chain, int module, int step) const;

  const std::vector<Band>& subbands() const { return subbands_; }
  const std::vector<double>& centers() const { return centers_; }

 private:
  int k_ = 0;
  int m_ = 0;
  int p_ = 0;
  double chirp_bw_ = 0.0;
  std::vector<Band> subbands_;
  std::vector<double> centers_;
};

struct ScheduleEntry {
  int slot = 0;
  int chain = 0;
  int module = 0;
  int step = 0;
  Pol pol_tx = Pol::H;

  friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) = default;
  friend auto operator<=>(const ScheduleEntry&, const ScheduleEntry&) = default;
};

struct Schedule {
  std::vector<ScheduleEntry> entries;
  int n_slots = 0;
};

struct ScheduleVerdict {
  bool ok = true;
  std::string violation;
  int slot = -1;
  int entry = -1;

  explicit operator bool() const { return ok; }
  std::string describe() const;
};

/// Throws std::invalid_argument when the fabric config is invalid, including
/// "chirp does not fit subband step".
SubbandPlan partition_band(const FabricConfig& cfg);

/// Round-robin plan: modules in the outer loop, steps in the inner loop, all
/// K chains concurrent, one single-pol frame per entry of `pol_states`.
Schedule build_schedule(const FabricConfig& cfg, const std::vector<Pol>& pol_states);

/// Checks slot discipline, frame coverage, frame length, per-frame pol
/// uniformity and spectral disjointness of concurrent entries. Reports the
/// first violation found in slot order.
ScheduleVerdict validate_schedule(const Schedule& sched, const SubbandPlan& plan,
                                  const FabricConfig& cfg);

double frame_duration(const Schedule& sched, const FabricConfig& cfg);

inline int single_pol_frame_slots(const FabricConfig& cfg) { return cfg.m_modules * cfg.p_steps; }

}  // namespace gensense
