// SPDX-License-Identifier: Apache-2.0
#include <gensense/scheduler.hpp>

#include <sstream>
#include <stdexcept>

namespace gensense {

SubbandPlan::SubbandPlan(int k_chains, int m_modules, int p_steps, double chirp_bandwidth_hz,
                         std::vector<Band> subbands, std::vector<double> centers)
    : k_(k_chains),
      m_(m_modules),
      p_(p_steps),
      chirp_bw_(chirp_bandwidth_hz),
      subbands_(std::move(subbands)),
      centers_(std::move(centers)) {
  if (subbands_.size() != static_cast<std::size_t>(k_ * m_) ||
      centers_.size() != static_cast<std::size_t>(k_ * m_ * p_))
    throw std::invalid_argument("subband plan dimensions do not match K, M, P");
}

bool SubbandPlan::contains(int chain, int module, int step) const {
  return chain >= 0 && chain < k_ && module >= 0 && module < m_ && step >= 0 && step < p_;
}

const Band& SubbandPlan::subband(int chain, int module) const {
  if (!contains(chain, module, 0)) throw std::out_of_range("subband index out of range");
  return subbands_[static_cast<std::size_t>(chain * m_ + module)];
}

double SubbandPlan::center_hz(int chain, int module, int step) const {
  if (!contains(chain, module, step)) throw std::out_of_range("chirp index out of range");
  return centers_[static_cast<std::size_t>((chain * m_ + module) * p_ + step)];
}

Band SubbandPlan::chirp_band(int chain, int module, int step) const {
  const double fc = center_hz(chain, module, step);
  return {fc - 0.5 * chirp_bw_, fc + 0.5 * chirp_bw_};
}

std::string ScheduleVerdict::describe() const {
  if (ok) return "OK";
  std::ostringstream os;
  os << violation;
  if (slot >= 0) os << " at slot " << slot;
  if (entry >= 0) os << " (entry " << entry << ")";
  return os.str();
}

SubbandPlan partition_band(const FabricConfig& cfg) {
  const auto errors = cfg.check();
  if (!errors.empty()) throw std::invalid_argument(errors.front());

  const int n_sub = cfg.n_subbands();
  const double width = cfg.subband_width_hz();
  const double step = cfg.step_width_hz();
  std::vector<Band> subbands;
  std::vector<double> centers;
  subbands.reserve(static_cast<std::size_t>(n_sub));
  centers.reserve(static_cast<std::size_t>(cfg.n_vir()));
  for (int s = 0; s < n_sub; ++s) {
    // Edges from the band endpoints directly so the tiling is exact at both ends.
    const double lo = cfg.band_lo_hz + s * width;
    const double hi = (s + 1 == n_sub) ? cfg.band_hi_hz : cfg.band_lo_hz + (s + 1) * width;
    subbands.push_back({lo, hi});
    for (int p = 0; p < cfg.p_steps; ++p) centers.push_back(lo + (p + 0.5) * step);
  }
  return {cfg.k_chains, cfg.m_modules, cfg.p_steps, cfg.chirp_bandwidth_hz, std::move(subbands),
          std::move(centers)};
}

Schedule build_schedule(const FabricConfig& cfg, const std::vector<Pol>& pol_states) {
  Schedule sched;
  const int frame = single_pol_frame_slots(cfg);
  sched.n_slots = frame * static_cast<int>(pol_states.size());
  sched.entries.reserve(static_cast<std::size_t>(sched.n_slots * cfg.k_chains));
  int slot = 0;
  for (Pol pol : pol_states) {
    for (int m = 0; m < cfg.m_modules; ++m) {
      for (int p = 0; p < cfg.p_steps; ++p, ++slot) {
        for (int k = 0; k < cfg.k_chains; ++k) sched.entries.push_back({slot, k, m, p, pol});
      }
    }
  }
  return sched;
}

namespace {

ScheduleVerdict fail(std::string what, int slot = -1, int entry = -1) {
  return {false, std::move(what), slot, entry};
}

}  // namespace

ScheduleVerdict validate_schedule(const Schedule& sched, const SubbandPlan& plan,
                                  const FabricConfig& cfg) {
  const int K = cfg.k_chains, M = cfg.m_modules, P = cfg.p_steps;
  if (plan.k_chains() != K || plan.m_modules() != M || plan.p_steps() != P)
    return fail("subband plan does not match fabric dimensions");

  const int frame = single_pol_frame_slots(cfg);
  if (sched.n_slots <= 0 || sched.n_slots % frame != 0)
    return fail("frame length mismatch: " + std::to_string(sched.n_slots) +
                " slots is not a positive multiple of M*P = " + std::to_string(frame));

  std::vector<std::vector<int>> by_slot(static_cast<std::size_t>(sched.n_slots));
  for (std::size_t i = 0; i < sched.entries.size(); ++i) {
    const auto& e = sched.entries[i];
    if (e.slot < 0 || e.slot >= sched.n_slots)
      return fail("slot index out of range", e.slot, static_cast<int>(i));
    if (!plan.contains(e.chain, e.module, e.step))
      return fail("entry references module or step outside the fabric", e.slot,
                  static_cast<int>(i));
    by_slot[static_cast<std::size_t>(e.slot)].push_back(static_cast<int>(i));
  }

  // concurrent chirps must occupy pairwise disjoint bands
  for (int s = 0; s < sched.n_slots; ++s) {
    const auto& idx = by_slot[static_cast<std::size_t>(s)];
    for (std::size_t a = 0; a < idx.size(); ++a) {
      const auto& ea = sched.entries[static_cast<std::size_t>(idx[a])];
      const Band ba = plan.chirp_band(ea.chain, ea.module, ea.step);
      for (std::size_t b = a + 1; b < idx.size(); ++b) {
        const auto& eb = sched.entries[static_cast<std::size_t>(idx[b])];
        if (ba.overlaps(plan.chirp_band(eb.chain, eb.module, eb.step)))
          return fail("spectral collision", s, idx[b]);
      }
    }
  }

  // every (chain, module, step) exactly once per single-pol frame
  const int n_frames = sched.n_slots / frame;
  for (int f = 0; f < n_frames; ++f) {
    std::vector<int> count(static_cast<std::size_t>(K * M * P), 0);
    std::vector<int> first_entry(count.size(), -1);
    for (int s = f * frame; s < (f + 1) * frame; ++s) {
      for (int i : by_slot[static_cast<std::size_t>(s)]) {
        const auto& e = sched.entries[static_cast<std::size_t>(i)];
        const auto key = static_cast<std::size_t>((e.chain * M + e.module) * P + e.step);
        if (++count[key] == 1) first_entry[key] = i;
      }
    }
    for (std::size_t key = 0; key < count.size(); ++key) {
      if (count[key] == 0) {
        const int k = static_cast<int>(key) / (M * P);
        const int m = (static_cast<int>(key) / P) % M;
        const int p = static_cast<int>(key) % P;
        return fail("incomplete frame coverage: frame " + std::to_string(f) + " lacks (chain " +
                        std::to_string(k) + ", module " + std::to_string(m) + ", step " +
                        std::to_string(p) + ")",
                    f * frame);
      }
    }
    for (std::size_t key = 0; key < count.size(); ++key) {
      if (count[key] > 1)
        return fail("duplicate activation within frame " + std::to_string(f),
                    sched.entries[static_cast<std::size_t>(first_entry[key])].slot,
                    first_entry[key]);
    }
  }

  // exactly one activation per chain per slot
  for (int s = 0; s < sched.n_slots; ++s) {
    std::vector<int> per_chain(static_cast<std::size_t>(K), 0);
    for (int i : by_slot[static_cast<std::size_t>(s)])
      ++per_chain[static_cast<std::size_t>(sched.entries[static_cast<std::size_t>(i)].chain)];
    for (int k = 0; k < K; ++k) {
      if (per_chain[static_cast<std::size_t>(k)] == 0)
        return fail("chain " + std::to_string(k) + " idle", s);
      if (per_chain[static_cast<std::size_t>(k)] > 1)
        return fail("chain " + std::to_string(k) + " activated more than once", s);
    }
  }

  // each single-pol frame uses one transmit polarization
  for (int f = 0; f < n_frames; ++f) {
    const auto& head = by_slot[static_cast<std::size_t>(f * frame)];
    const Pol pol = sched.entries[static_cast<std::size_t>(head.front())].pol_tx;
    for (int s = f * frame; s < (f + 1) * frame; ++s) {
      for (int i : by_slot[static_cast<std::size_t>(s)]) {
        if (sched.entries[static_cast<std::size_t>(i)].pol_tx != pol)
          return fail("mixed transmit polarization within frame " + std::to_string(f), s, i);
      }
    }
  }
  return {};
}

double frame_duration(const Schedule& sched, const FabricConfig& cfg) {
  return sched.n_slots * cfg.chirp_duration_s;
}

}  // namespace gensense
