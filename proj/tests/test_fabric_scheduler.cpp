// SPDX-License-Identifier: Apache-2.0
#include "schedule_oracle.hpp"

#include <gensense/fabric.hpp>
#include <gensense/scheduler.hpp>

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

using namespace gensense;

namespace {

FabricConfig case_study() {
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

FabricConfig small(int k, int m, int p) {
  FabricConfig c = case_study();
  c.k_chains = k;
  c.m_modules = m;
  c.p_steps = p;
  c.chirp_bandwidth_hz = 0.5 * c.step_width_hz();
  return c;
}

}  // namespace

TEST_CASE("partition_band splits the band into equal contiguous subbands") {
  const auto cfg = case_study();
  const auto plan = partition_band(cfg);
  REQUIRE(plan.subbands().size() == 8);
  CHECK(plan.subband(0, 0).lo_hz == doctest::Approx(60e9));
  CHECK(plan.subband(0, 0).hi_hz == doctest::Approx(62.625e9));
  double edge = cfg.band_lo_hz;
  for (int k = 0; k < 2; ++k) {
    for (int m = 0; m < 4; ++m) {
      const Band b = plan.subband(k, m);
      CHECK(b.width() == doctest::Approx(2.625e9));
      CHECK(b.lo_hz == doctest::Approx(edge));
      edge = b.hi_hz;
      for (int p = 0; p < 8; ++p) {
        const Band cb = plan.chirp_band(k, m, p);
        CHECK(cb.width() == doctest::Approx(300e6));
        CHECK(cb.lo_hz >= b.lo_hz - 1.0);
        CHECK(cb.hi_hz <= b.hi_hz + 1.0);
        if (p > 0) CHECK_FALSE(cb.overlaps(plan.chirp_band(k, m, p - 1)));
      }
    }
  }
  CHECK(edge == doctest::Approx(81e9));
}

TEST_CASE("partition_band degenerate and infeasible configs") {
  FabricConfig one = case_study();
  one.k_chains = one.m_modules = one.p_steps = 1;
  one.band_hi_hz = 61e9;
  const auto plan = partition_band(one);
  CHECK(plan.center_hz(0, 0, 0) == doctest::Approx(60.5e9));

  FabricConfig wide = case_study();
  wide.chirp_bandwidth_hz = 400e6;  // step slice is 328.125 MHz
  CHECK_THROWS_WITH_AS(partition_band(wide), doctest::Contains("chirp does not fit"),
                       std::invalid_argument);
}

TEST_CASE("subband centers sit at lo + (p + 1/2) * width / P") {
  const auto cfg = case_study();
  const auto plan = partition_band(cfg);
  for (int k = 0; k < cfg.k_chains; ++k)
    for (int m = 0; m < cfg.m_modules; ++m)
      for (int p = 0; p < cfg.p_steps; ++p) {
        const auto [lo, hi] = test::oracle_chirp_band(cfg, k, m, p);
        CHECK(plan.center_hz(k, m, p) == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-14));
      }
}

TEST_CASE("build_schedule examples") {
  const auto cfg = case_study();
  const auto plan = partition_band(cfg);

  const auto dual = build_schedule(cfg, {Pol::H, Pol::V});
  CHECK(dual.n_slots == 64);
  CHECK(dual.entries.size() == 128);
  CHECK(validate_schedule(dual, plan, cfg).ok);

  const auto single = build_schedule(cfg, {Pol::H});
  CHECK(single.n_slots == 32);
  CHECK(single.entries.size() == 64);
  CHECK(validate_schedule(single, plan, cfg).ok);

  FabricConfig one = case_study();
  one.k_chains = one.m_modules = one.p_steps = 1;
  const auto s1 = build_schedule(one, {Pol::H});
  CHECK(s1.n_slots == 1);
  CHECK(s1.entries.size() == 1);
  CHECK(validate_schedule(s1, partition_band(one), one).ok);

  const auto c2 = small(2, 2, 2);
  const auto s2 = build_schedule(c2, {Pol::H});
  CHECK(s2.n_slots == 4);
  CHECK(s2.entries.size() == 8);
  CHECK(test::oracle_valid(s2, c2));
}

TEST_CASE("validator detects planted faults") {
  const auto cfg = case_study();
  const auto plan = partition_band(cfg);

  SUBCASE("spectral collision") {
    auto s = build_schedule(cfg, {Pol::H});
    // Put both chains in the same subband by forcing chain 1 onto chain 0's plan.
    FabricConfig shared = cfg;
    SubbandPlan collide(2, 4, 8, cfg.chirp_bandwidth_hz,
                        {plan.subband(0, 0), plan.subband(0, 1), plan.subband(0, 2),
                         plan.subband(0, 3), plan.subband(0, 0), plan.subband(0, 1),
                         plan.subband(0, 2), plan.subband(0, 3)},
                        [&] {
                          std::vector<double> c = plan.centers();
                          std::copy(c.begin(), c.begin() + 32, c.begin() + 32);
                          return c;
                        }());
    const auto v = validate_schedule(s, collide, shared);
    CHECK_FALSE(v.ok);
    CHECK(v.violation == "spectral collision");
    CHECK(v.slot == 0);
  }
  SUBCASE("incomplete coverage") {
    auto s = build_schedule(cfg, {Pol::H});
    for (auto& e : s.entries)
      if (e.chain == 0 && e.module == 1 && e.step == 3) e.step = 2;
    const auto v = validate_schedule(s, plan, cfg);
    CHECK_FALSE(v.ok);
    CHECK(v.violation.find("incomplete frame coverage") == 0);
    CHECK(v.describe().find("chain 0, module 1, step 3") != std::string::npos);
  }
  SUBCASE("idle chain") {
    auto s = build_schedule(cfg, {Pol::H});
    s.entries.erase(s.entries.begin());
    const auto v = validate_schedule(s, plan, cfg);
    CHECK_FALSE(v.ok);
  }
  SUBCASE("frame length") {
    auto s = build_schedule(cfg, {Pol::H});
    s.n_slots = 33;
    const auto v = validate_schedule(s, plan, cfg);
    CHECK_FALSE(v.ok);
    CHECK(v.violation.find("frame length mismatch") == 0);
  }
  SUBCASE("mixed polarization") {
    auto s = build_schedule(cfg, {Pol::H});
    for (auto& e : s.entries)
      if (e.slot == 5) e.pol_tx = Pol::V;
    const auto v = validate_schedule(s, plan, cfg);
    CHECK_FALSE(v.ok);
    CHECK(v.violation.find("mixed transmit polarization") == 0);
  }
}

TEST_CASE("frame duration") {
  const auto cfg = case_study();
  const auto dual = build_schedule(cfg, {Pol::H, Pol::V});
  const auto single = build_schedule(cfg, {Pol::H});
  CHECK(frame_duration(dual, cfg) == doctest::Approx(6.4e-3));
  CHECK(frame_duration(dual, cfg) == doctest::Approx(2.0 * frame_duration(single, cfg)));
  CHECK(single_pol_frame_slots(cfg) == 32);

  FabricConfig one = case_study();
  one.k_chains = one.m_modules = one.p_steps = 1;
  CHECK(frame_duration(build_schedule(one, {Pol::H}), one) == doctest::Approx(one.chirp_duration_s));
}

TEST_CASE("random configs produce valid schedules") {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> dk(1, 4), dm(1, 5), dp(1, 6), dpol(0, 2);
  for (int i = 0; i < 1000; ++i) {
    const auto cfg = small(dk(rng), dm(rng), dp(rng));
    std::vector<Pol> pols;
    switch (dpol(rng)) {
      case 0: pols = {Pol::H}; break;
      case 1: pols = {Pol::V}; break;
      default: pols = {Pol::H, Pol::V}; break;
    }
    const auto s = build_schedule(cfg, pols);
    const auto v = validate_schedule(s, partition_band(cfg), cfg);
    REQUIRE_MESSAGE(v.ok, v.describe());
    CHECK(s.n_slots == cfg.m_modules * cfg.p_steps * static_cast<int>(pols.size()));
    CHECK(test::oracle_valid(s, cfg));
  }
}

TEST_CASE("permuting slots within a frame preserves validity") {
  const auto cfg = case_study();
  const auto plan = partition_band(cfg);
  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto s = build_schedule(cfg, {Pol::H, Pol::V});
    const int frame = single_pol_frame_slots(cfg);
    std::vector<int> perm(s.n_slots);
    for (int f = 0; f < s.n_slots / frame; ++f) {
      std::iota(perm.begin() + f * frame, perm.begin() + (f + 1) * frame, f * frame);
      std::shuffle(perm.begin() + f * frame, perm.begin() + (f + 1) * frame, rng);
    }
    for (auto& e : s.entries) e.slot = perm[e.slot];
    CHECK(validate_schedule(s, plan, cfg).ok);

    // A global permutation can mix polarizations but never creates collisions.
    std::vector<int> global(s.n_slots);
    std::iota(global.begin(), global.end(), 0);
    std::shuffle(global.begin(), global.end(), rng);
    for (auto& e : s.entries) e.slot = global[e.slot];
    CHECK(validate_schedule(s, plan, cfg).violation != "spectral collision");
  }
}

TEST_CASE("exhaustive enumeration for K=2, M=2, P=2") {
  const auto cfg = small(2, 2, 2);
  const auto plan = partition_band(cfg);
  constexpr int kStates = 4;  // (module, step) pairs per chain

  auto enumerate = [&](int n_slots, int& valid_oracle, int& valid_validator, int& disagreements) {
    const long total = 1L << (4 * n_slots);
    for (long code = 0; code < total; ++code) {
      Schedule s;
      s.n_slots = n_slots;
      long c = code;
      for (int slot = 0; slot < n_slots; ++slot) {
        for (int chain = 0; chain < 2; ++chain) {
          const int st = static_cast<int>(c % kStates);
          c /= kStates;
          s.entries.push_back({slot, chain, st / 2, st % 2, Pol::H});
        }
      }
      const bool o = test::oracle_valid(s, cfg);
      const bool v = validate_schedule(s, plan, cfg).ok;
      valid_oracle += o;
      valid_validator += v;
      disagreements += (o != v);
    }
  };

  int vo = 0, vv = 0, dis = 0;
  enumerate(4, vo, vv, dis);
  CHECK(dis == 0);
  CHECK(vo == 24 * 24);  // each chain visits its 4 states in any order
  CHECK(vv == 576);

  for (int n = 1; n < 4; ++n) {
    int o = 0, v = 0, d = 0;
    enumerate(n, o, v, d);
    CHECK(o == 0);
    CHECK(v == 0);
    CHECK(d == 0);
  }

  const auto built = build_schedule(cfg, {Pol::H});
  CHECK(built.n_slots == 4);
}
