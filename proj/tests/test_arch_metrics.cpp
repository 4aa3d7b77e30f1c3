// SPDX-License-Identifier: Apache-2.0
#include <gensense/arch_metrics.hpp>
#include <gensense/scheduler.hpp>

#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

using namespace gensense;
using namespace gensense::arch;

TEST_CASE("virtual element counts") {
  CHECK(virtual_elements({PhasedArray{64}}) == 64);
  CHECK(virtual_elements({TdmMimo{8, 8}}) == 64);
  CHECK(virtual_elements({MrcFaaCaf{2, 4, 8}}) == 64);
  CHECK(virtual_elements({MrcFaaCaf{1, 1, 1}}) == 1);
  CHECK(virtual_elements({TdmMimo{4, 16}}) == 64);
}

TEST_CASE("frame multipliers and update rates") {
  CHECK(frame_multiplier({PhasedArray{64}, 2}) == 2);
  CHECK(frame_multiplier({TdmMimo{8, 8}, 2}) == 16);
  CHECK(frame_multiplier({MrcFaaCaf{2, 4, 8}, 2}) == 2);
  CHECK(frame_multiplier({TdmMimo{8, 8}, 1}) == 8);
  CHECK(frame_multiplier({TdmMimo{4, 16}, 2}) == 8);
  CHECK(update_rate({TdmMimo{8, 8}, 2}).str() == "1/(16T0)");
  CHECK(update_rate({PhasedArray{64}, 2}).str() == "1/(2T0)");
}

TEST_CASE("absolute chirps per frame") {
  CHECK(absolute_chirps_per_frame({PhasedArray{64}, 2}) == 2);
  CHECK(absolute_chirps_per_frame({TdmMimo{8, 8}, 2}) == 16);
  CHECK(absolute_chirps_per_frame({MrcFaaCaf{2, 4, 8}, 2}) == 64);
}

TEST_CASE("invalid architecture parameters") {
  CHECK_THROWS_AS(virtual_elements({PhasedArray{0}}), std::invalid_argument);
  CHECK_THROWS_AS(frame_multiplier({TdmMimo{0, 8}}), std::invalid_argument);
  CHECK_THROWS_AS(frame_multiplier({MrcFaaCaf{2, 4, 8}, 0}), std::invalid_argument);
  CHECK_THROWS_AS(compare({}), std::invalid_argument);
}

TEST_CASE("case-study comparison") {
  const auto rows = compare(case_study_specs());
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].name == "Phased Array");
  CHECK(rows[1].name == "TDM-MIMO");
  CHECK(rows[2].name == "MRC-FaA-CAF");
  for (const auto& r : rows) {
    CHECK(r.virtual_elements == 64);
    CHECK(r.pol_channels_per_element == 4);
  }
  CHECK(rows[0].frame_multiplier == 2);
  CHECK(rows[1].frame_multiplier == 16);
  CHECK(rows[2].frame_multiplier == 2);
  CHECK(rows[2].ratings.energy == Ordinal::LowModerate);
  CHECK(rows[1].ratings.persistence_suitability == Ordinal::Low);
  CHECK(rows[2].ratings.deployment_flexibility == Ordinal::High);
}

TEST_CASE("multiplier is monotone in transmit count and polarization states") {
  for (int pol = 1; pol <= 3; ++pol)
    for (int ntx = 1; ntx < 16; ++ntx) {
      CHECK(frame_multiplier({TdmMimo{ntx + 1, 4}, pol}) > frame_multiplier({TdmMimo{ntx, 4}, pol}));
      CHECK(frame_multiplier({TdmMimo{ntx, 4}, pol + 1}) > frame_multiplier({TdmMimo{ntx, 4}, pol}));
    }
  // Fabric and phased-array multipliers do not depend on aperture size.
  for (int n = 1; n <= 128; n *= 2) {
    CHECK(frame_multiplier({PhasedArray{n}, 2}) == 2);
    CHECK(frame_multiplier({MrcFaaCaf{n, 2, 3}, 2}) == 2);
  }
}

TEST_CASE("fabric chirp count matches a dual-pol schedule") {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> dk(1, 4), dm(1, 5), dp(1, 6);
  for (int i = 0; i < 50; ++i) {
    FabricConfig cfg;
    cfg.k_chains = dk(rng);
    cfg.m_modules = dm(rng);
    cfg.p_steps = dp(rng);
    cfg.band_lo_hz = 60e9;
    cfg.band_hi_hz = 81e9;
    cfg.chirp_bandwidth_hz = 0.5 * cfg.step_width_hz();
    cfg.chirp_duration_s = 100e-6;
    const auto s = build_schedule(cfg, {Pol::H, Pol::V});
    CHECK(absolute_chirps_per_frame({MrcFaaCaf{cfg.k_chains, cfg.m_modules, cfg.p_steps}, 2}) == s.n_slots);
  }
}

TEST_CASE("rendered table matches the golden file") {
  std::ifstream in(std::string(GENSENSE_SOURCE_DIR) + "/tests/golden/comparison_table.txt");
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(render_text(compare(case_study_specs())) == ss.str());
}

TEST_CASE("csv rendering") {
  const auto csv = render_csv(compare(case_study_specs()));
  std::istringstream is(csv);
  std::string line;
  int n = 0;
  while (std::getline(is, line)) ++n;
  CHECK(n == 4);
  CHECK(csv.find("TDM-MIMO,64,4,16,1/(16T0),16,Moderate-High,Moderate,Moderate,Low") != std::string::npos);
}
