// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gensense/control_space.hpp>
#include <gensense/scene.hpp>
#include <gensense/types.hpp>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>

namespace gensense {

template <typename Scalar>
struct ChirpConfig {
  Scalar center_hz = 0;
  Scalar bandwidth_hz = 0;
  Scalar duration_s = 0;
  Scalar sample_rate_hz = 0;
  int n_samples = 0;

  Scalar slope() const { return bandwidth_hz / duration_s; }
  Scalar band_lo() const { return center_hz - bandwidth_hz / 2; }
  Scalar band_hi() const { return center_hz + bandwidth_hz / 2; }
};

using ChirpConfigd = ChirpConfig<double>;

/// Builds a chirp with n_samples = round(duration * sample_rate). Throws
/// std::invalid_argument when that leaves fewer than two samples.
template <typename Scalar>
ChirpConfig<Scalar> make_chirp(Scalar center_hz, Scalar bandwidth_hz, Scalar duration_s,
                               Scalar sample_rate_hz) {
  if (!(center_hz > 0) || !(bandwidth_hz > 0) || !(duration_s > 0) || !(sample_rate_hz > 0))
    throw std::invalid_argument("chirp parameters must be positive");
  const auto n = static_cast<long long>(std::llround(duration_s * sample_rate_hz));
  if (n < 2) throw std::invalid_argument("chirp must span at least two samples");
  return {center_hz, bandwidth_hz, duration_s, sample_rate_hz, static_cast<int>(n)};
}

/// Identifies a sensing state for noise-stream derivation and file naming.
struct StateId {
  int slot = 0;
  int chain = 0;
  int module = 0;
  int index = 0;
  Pol pol_tx = Pol::H;

  static StateId of(const ControlPoint& u) {
    return {u.s.slot_index, u.q.chain_id, u.q.module_id, u.f.index, u.s.pol_tx};
  }
  std::uint64_t key() const {
    return (static_cast<std::uint64_t>(slot) << 40) ^ (static_cast<std::uint64_t>(index) << 20) ^
           (static_cast<std::uint64_t>(chain) << 12) ^ (static_cast<std::uint64_t>(module) << 2) ^
           static_cast<std::uint64_t>(index_of(pol_tx));
  }
};

enum class NoiseKind { None, ComplexGaussian };

struct NoiseConfig {
  NoiseKind kind = NoiseKind::None;
  /// Signal-to-noise ratio per sample, referenced to a unit-amplitude scatterer.
  double snr_db = 0.0;
  std::uint64_t seed = 0;
};

template <typename Scalar>
struct BeatSignal {
  CVector<Scalar> samples;
  ChirpConfig<Scalar> chirp;
  StateId state;
  Pol pol_rx = Pol::H;
};

/// Dechirped beat frequency f_b = 2 R slope / c.
template <typename Scalar>
constexpr Scalar beat_frequency(Scalar range_m, Scalar slope_hz_per_s, Scalar c_mps) {
  return Scalar(2) * range_m * slope_hz_per_s / c_mps;
}

/// Range resolution c / (2B).
template <typename Scalar>
constexpr Scalar range_resolution(Scalar bandwidth_hz, Scalar c_mps) {
  return c_mps / (Scalar(2) * bandwidth_hz);
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Noise stream seed for one (state, rx) pair; independent of evaluation order.
inline std::uint64_t noise_stream_seed(std::uint64_t seed, const StateId& id, Pol pol_rx) {
  return detail::splitmix64(seed ^ detail::splitmix64(id.key() * 2 + index_of(pol_rx)));
}

/// Fast-time sample instants, centered on the chirp midpoint where the
/// instantaneous transmit frequency equals the chirp center.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> fast_time(const ChirpConfig<Scalar>& chirp) {
  const Scalar mid = Scalar(chirp.n_samples - 1) / 2;
  return (Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::LinSpaced(chirp.n_samples, 0,
                                                              Scalar(chirp.n_samples - 1))
              .array() -
          mid)
             .matrix() /
         chirp.sample_rate_hz;
}

/// Adds complex white Gaussian noise of total power 10^(-snr_db/10) per sample.
template <typename Scalar>
void add_noise(CVector<Scalar>& samples, const NoiseConfig& noise, const StateId& id, Pol pol_rx) {
  if (noise.kind == NoiseKind::None) return;
  if (!std::isfinite(noise.snr_db)) throw std::invalid_argument("noise snr_db must be finite");
  std::mt19937_64 rng(noise_stream_seed(noise.seed, id, pol_rx));
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double sigma = std::sqrt(std::pow(10.0, -noise.snr_db / 10.0) / 2.0);
  for (Eigen::Index n = 0; n < samples.size(); ++n) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    samples[n] += std::complex<Scalar>(Scalar(sigma * re), Scalar(sigma * im));
  }
}

/// Noiseless point-target dechirp response plus optional additive noise:
///   y[n] = sum_i a_i exp(j 2 pi f_b,i t_n) exp(-j 2 pi f_c 2 R_i / c) + n[n]
/// with a_i the (rx, tx) entry of scatterer i's scattering matrix.
template <typename Scalar>
BeatSignal<Scalar> simulate_state(const ControlPoint& u, const Scene<Scalar>& scene,
                                  const ChirpConfig<Scalar>& chirp, const NoiseConfig& noise,
                                  Pol pol_rx, Scalar c_mps = Scalar(kSpeedOfLight)) {
  if (std::abs(double(chirp.center_hz) - u.f.center_hz) > 1e-6 * u.f.center_hz)
    throw std::invalid_argument("chirp is not centered at the state's center frequency");
  constexpr double two_pi = 2.0 * std::numbers::pi;

  BeatSignal<Scalar> sig;
  sig.chirp = chirp;
  sig.state = StateId::of(u);
  sig.pol_rx = pol_rx;
  sig.samples = CVector<Scalar>::Zero(chirp.n_samples);

  const Vec3<Scalar> element = u.q.element_position.template cast<Scalar>();
  const auto t = fast_time(chirp);
  for (const auto& sc : scene.scatterers) {
    std::complex<Scalar> a = channel(sc.scattering, u.s.pol_tx, pol_rx);
    const Scalar r = range_to<Scalar>(sc.position, element);
    if (a == std::complex<Scalar>(0)) continue;
    if (scene.spreading_loss) a /= r * r;
    const Scalar fb = beat_frequency<Scalar>(r, chirp.slope(), c_mps);
    const double carrier_phase = -two_pi * double(chirp.center_hz) * 2.0 * double(r) / double(c_mps);
    const std::complex<Scalar> a0 = a * std::complex<Scalar>(std::polar(1.0, carrier_phase));
    for (int n = 0; n < chirp.n_samples; ++n)
      sig.samples[n] += a0 * std::complex<Scalar>(std::polar(1.0, two_pi * double(fb) * double(t[n])));
  }
  add_noise(sig.samples, noise, sig.state, pol_rx);
  return sig;
}

}  // namespace gensense
