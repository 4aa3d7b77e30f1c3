// SPDX-License-Identifier: Apache-2.0
#include <gensense/fmcw.hpp>

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace gensense;

namespace {

constexpr double kC = 3e8;

ControlPoint state_at(double center_hz, Pol tx = Pol::H, int slot = 0) {
  ControlPoint u;
  u.f = {0, center_hz, 300e6};
  u.q = {0, 0, Vec3d::Zero()};
  u.s = {100e-6, tx, slot};
  return u;
}

Scened one_target(const Vec3d& p, const ScatteringMatrixd& s = ScatteringMatrixd::Identity()) {
  Scened scene;
  scene.scatterers.push_back({p, s});
  return scene;
}

/// Frequency of the largest DTFT magnitude, found by scanning directly on the
/// centered sample instants.
double dtft_peak(const CVectord& x, double fs, double f_max, double step) {
  const double mid = 0.5 * (x.size() - 1);
  double best_f = 0.0, best = -1.0;
  for (double f = 0.0; f <= f_max; f += step) {
    std::complex<double> acc = 0.0;
    for (Eigen::Index n = 0; n < x.size(); ++n)
      acc += x[n] * std::polar(1.0, -2.0 * std::numbers::pi * f * (n - mid) / fs);
    if (std::abs(acc) > best) {
      best = std::abs(acc);
      best_f = f;
    }
  }
  return best_f;
}

}  // namespace

TEST_CASE("beat frequency examples") {
  CHECK(beat_frequency(0.0, 2.1e14, kC) == 0.0);
  CHECK(beat_frequency(5.0, 2.1e14, kC) == doctest::Approx(7.0e6));
  CHECK(beat_frequency(1.0, 1e13, kC) == doctest::Approx(66666.667).epsilon(1e-8));
}

TEST_CASE("range resolution examples") {
  CHECK(range_resolution(21e9, kC) == doctest::Approx(7.142857e-3).epsilon(1e-6));
  CHECK(range_resolution(150e6, kC) == doctest::Approx(1.0));
  CHECK(range_resolution(21e9, kSpeedOfLight) == doctest::Approx(7.138e-3).epsilon(1e-3));
}

TEST_CASE("make_chirp sample count") {
  const auto c = make_chirp(60e9, 300e6, 100e-6, 2e6);
  CHECK(c.n_samples == 200);
  CHECK(c.slope() == doctest::Approx(3e12));
  CHECK(c.band_lo() == doctest::Approx(59.85e9));
  CHECK_THROWS_AS(make_chirp(60e9, 300e6, 100e-6, 1e4), std::invalid_argument);
  CHECK_THROWS_AS(make_chirp(60e9, -1.0, 100e-6, 2e6), std::invalid_argument);
}

TEST_CASE("fast time is centered on the chirp midpoint") {
  const auto c = make_chirp(60e9, 300e6, 100e-6, 2e6);
  const auto t = fast_time(c);
  CHECK(t.sum() == doctest::Approx(0.0));
  CHECK(t[1] - t[0] == doctest::Approx(0.5e-6));
}

TEST_CASE("empty scene and cross-pol-free target give zero signal") {
  const auto chirp = make_chirp(60e9, 300e6, 100e-6, 2e6);
  const auto u = state_at(60e9);
  const auto empty = simulate_state(u, Scened{}, chirp, {}, Pol::H, kC);
  CHECK(empty.samples.size() == 200);
  CHECK(empty.samples.norm() == 0.0);

  const auto diag = one_target(Vec3d(0, 0, 2));
  CHECK(simulate_state(u, diag, chirp, {}, Pol::V, kC).samples.norm() == 0.0);
  CHECK(simulate_state(u, diag, chirp, {}, Pol::H, kC).samples.norm() > 0.0);
}

TEST_CASE("single target: beat tone matches the analytic model") {
  const auto chirp = make_chirp(60e9, 21e9, 100e-6, 20e6);
  const auto u = state_at(60e9);
  const auto sig = simulate_state(u, one_target(Vec3d(0, 0, 5.0)), chirp, {}, Pol::H, kC);
  CHECK(sig.samples.cwiseAbs().minCoeff() == doctest::Approx(1.0));
  CHECK(sig.samples.cwiseAbs().maxCoeff() == doctest::Approx(1.0));
  const double fb = beat_frequency(5.0, chirp.slope(), kC);
  CHECK(fb == doctest::Approx(7.0e6));
  const double step = chirp.sample_rate_hz / (4.0 * chirp.n_samples);
  CHECK(std::abs(dtft_peak(sig.samples, chirp.sample_rate_hz, 0.5 * chirp.sample_rate_hz, step) - fb) <=
        step);

  // The midpoint sample carries the round-trip carrier phase only.
  const auto direct = std::polar(1.0, -2.0 * std::numbers::pi * 60e9 * 2.0 * 5.0 / kC);
  const auto t = fast_time(chirp);
  const auto at0 = sig.samples[100] * std::polar(1.0, -2.0 * std::numbers::pi * fb * t[100]);
  CHECK(std::abs(at0 - direct) < 1e-9);
}

TEST_CASE("signal is linear in the scattering matrix") {
  const auto chirp = make_chirp(70e9, 300e6, 100e-6, 2e6);
  const auto u = state_at(70e9, Pol::V);
  ScatteringMatrixd s1, s2;
  s1 << 1.0, 0.3, std::complex<double>(0, 0.2), -0.5;
  s2 << std::complex<double>(0.1, 0.7), -1.0, 0.4, std::complex<double>(0, 1);
  const Vec3d p1(0.1, 0, 2.0), p2(-0.2, 0.05, 3.0);
  const std::complex<double> alpha(0.7, -1.3), beta(-2.0, 0.25);

  Scened both;
  both.scatterers = {{p1, alpha * s1}, {p2, beta * s2}};
  for (Pol rx : {Pol::H, Pol::V}) {
    const auto y = simulate_state(u, both, chirp, {}, rx, kC).samples;
    const auto y1 = simulate_state(u, one_target(p1, s1), chirp, {}, rx, kC).samples;
    const auto y2 = simulate_state(u, one_target(p2, s2), chirp, {}, rx, kC).samples;
    const CVectord expect = alpha * y1 + beta * y2;
    CHECK((y - expect).norm() <= 1e-12 * expect.norm());
  }
}

TEST_CASE("coincident scatterer is rejected") {
  const auto chirp = make_chirp(70e9, 300e6, 100e-6, 2e6);
  CHECK_THROWS_WITH_AS(simulate_state(state_at(70e9), one_target(Vec3d::Zero()), chirp, {}, Pol::H, kC),
                       "zero range", ModelError);
}

TEST_CASE("chirp must be centered on the state's frequency") {
  const auto chirp = make_chirp(70e9, 300e6, 100e-6, 2e6);
  CHECK_THROWS_AS(simulate_state(state_at(71e9), one_target(Vec3d(0, 0, 1)), chirp, {}, Pol::H, kC),
                  std::invalid_argument);
}

TEST_CASE("noisy simulation is deterministic per seed and state") {
  const auto chirp = make_chirp(70e9, 300e6, 100e-6, 2e6);
  const auto scene = one_target(Vec3d(0, 0, 2));
  const NoiseConfig noise{NoiseKind::ComplexGaussian, 10.0, 42};
  const auto a = simulate_state(state_at(70e9, Pol::H, 3), scene, chirp, noise, Pol::H, kC);
  const auto b = simulate_state(state_at(70e9, Pol::H, 3), scene, chirp, noise, Pol::H, kC);
  CHECK(a.samples == b.samples);

  const auto other_slot = simulate_state(state_at(70e9, Pol::H, 4), scene, chirp, noise, Pol::H, kC);
  const auto other_rx = simulate_state(state_at(70e9, Pol::H, 3), scene, chirp, noise, Pol::V, kC);
  const auto other_seed = simulate_state(state_at(70e9, Pol::H, 3), scene, chirp,
                                         NoiseConfig{NoiseKind::ComplexGaussian, 10.0, 43}, Pol::H, kC);
  CHECK(a.samples != other_slot.samples);
  CHECK(other_rx.samples.norm() > 0.0);
  CHECK(a.samples != other_seed.samples);
}

TEST_CASE("noise power matches the configured SNR") {
  const auto chirp = make_chirp(70e9, 300e6, 0.1, 1e6);
  REQUIRE(chirp.n_samples == 100000);
  for (double snr : {0.0, 10.0, 20.0}) {
    const NoiseConfig noise{NoiseKind::ComplexGaussian, snr, 7};
    const auto sig = simulate_state(state_at(70e9), Scened{}, chirp, noise, Pol::H, kC);
    const double power = sig.samples.squaredNorm() / sig.samples.size();
    CHECK(std::abs(10.0 * std::log10(power) + snr) <= 0.2);
  }
}

TEST_CASE("float instantiation") {
  const auto chirp = make_chirp<float>(70e9f, 300e6f, 100e-6f, 2e6f);
  Scene<float> scene;
  scene.scatterers.push_back({Vec3<float>(0, 0, 2), ScatteringMatrix<float>::Identity()});
  const auto sig = simulate_state<float>(state_at(70e9), scene, chirp, {}, Pol::H, 3e8f);
  CHECK(sig.samples.cwiseAbs().maxCoeff() == doctest::Approx(1.0f).epsilon(1e-4));
}
