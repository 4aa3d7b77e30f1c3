// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gensense/fabric.hpp>
#include <gensense/fmcw.hpp>
#include <gensense/scheduler.hpp>
#include <gensense/types.hpp>

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gensense {

/// A frequency-indexed state mapped onto the synthetic aperture.
struct VirtualElement {
  int index = 0;
  Vec3d position = Vec3d::Zero();
  double carrier_hz = 0.0;
  int chain = 0;
  int module = 0;
  int step = 0;
};

/// v = chain*M*P + module*P + step; position along the aperture at v*d;
/// carrier from the subband plan. Throws std::out_of_range on bad indices.
inline VirtualElement map_state_to_element(int chain, int module, int step,
                                           const FabricGeometry& geometry,
                                           const SubbandPlan& plan) {
  const int v = geometry.element_index(chain, module, step);
  return {v, geometry.element_position(v), plan.center_hz(chain, module, step), chain, module, step};
}

inline VirtualElement map_state_to_element(int chain, int module, int step,
                                           const FabricGeometry& geometry) {
  return map_state_to_element(chain, module, step, geometry, partition_band(geometry.config));
}

template <typename Scalar>
struct RangeProfile {
  CVector<Scalar> values;
  /// Range spacing between adjacent (padded) bins.
  Scalar bin_size_m = 0;
  /// Native per-chirp resolution c / (2 B_chirp).
  Scalar resolution_m = 0;
  StateId state;
  Pol pol_rx = Pol::H;

  Scalar range_of(Eigen::Index bin) const { return Scalar(bin) * bin_size_m; }
  /// Largest range the linear-interpolated lookup supports.
  Scalar max_range() const { return Scalar(values.size() - 1) * bin_size_m; }
};

template <typename Scalar>
struct ElementProfile {
  VirtualElement element;
  RangeProfile<Scalar> profile;
};

/// Symmetric Hamming taper (raised cosine on a 0.08 pedestal).
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> hamming_window(int n) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> w(n);
  if (n == 1) {
    w[0] = 1;
    return w;
  }
  for (int i = 0; i < n; ++i)
    w[i] = Scalar(0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / (n - 1)));
  return w;
}

/// Windowed, zero-padded fast-time transform. Bins span beat frequencies
/// [0, fs); each bin is phase-referenced to the chirp midpoint so a single
/// scatterer's main lobe carries its carrier phase without a linear ramp.
/// Normalized so a unit tone peaks at magnitude 1.
template <typename Scalar>
RangeProfile<Scalar> range_profile(const BeatSignal<Scalar>& sig, int pad_factor = 4,
                                   Scalar c_mps = Scalar(kSpeedOfLight)) {
  if (pad_factor < 1) throw std::invalid_argument("pad_factor must be >= 1");
  if (!sig.samples.allFinite()) throw std::invalid_argument("beat signal has non-finite samples");
  const auto n = static_cast<int>(sig.samples.size());
  const int nfft = n * pad_factor;
  const auto w = hamming_window<Scalar>(n);

  CVector<Scalar> padded = CVector<Scalar>::Zero(nfft);
  padded.head(n) = sig.samples.cwiseProduct(w.template cast<std::complex<Scalar>>());
  CVector<Scalar> spectrum(nfft);
  Eigen::FFT<Scalar> fft;
  fft.fwd(spectrum, padded);

  const double mid = 0.5 * (n - 1);
  const Scalar norm = w.sum();
  for (int k = 0; k < nfft; ++k) {
    const double phase = 2.0 * std::numbers::pi * k * mid / nfft;
    spectrum[k] *= std::complex<Scalar>(std::polar(1.0, phase)) / norm;
  }

  RangeProfile<Scalar> prof;
  prof.values = std::move(spectrum);
  prof.bin_size_m = c_mps * sig.chirp.sample_rate_hz / (Scalar(2) * sig.chirp.slope() * Scalar(nfft));
  prof.resolution_m = range_resolution<Scalar>(sig.chirp.bandwidth_hz, c_mps);
  prof.state = sig.state;
  prof.pol_rx = sig.pol_rx;
  return prof;
}

/// Linear interpolation between bins; throws ModelError past the last bin.
template <typename Scalar>
std::complex<Scalar> sample_profile(const RangeProfile<Scalar>& prof, Scalar range_m) {
  const Scalar u = range_m / prof.bin_size_m;
  const auto last = static_cast<Scalar>(prof.values.size() - 1);
  if (!(u >= 0) || u > last) throw ModelError("grid exceeds range support");
  const auto k0 = static_cast<Eigen::Index>(std::floor(u));
  if (k0 >= prof.values.size() - 1) return prof.values[prof.values.size() - 1];
  const Scalar frac = u - Scalar(k0);
  return prof.values[k0] * (Scalar(1) - frac) + prof.values[k0 + 1] * frac;
}

/// Pixel lattice in the aperture plane (y fixed), rows along z, columns along x.
struct ImageGridSpec {
  double x_min = 0.0, x_max = 0.0, x_step = 0.0;
  double z_min = 0.0, z_max = 0.0, z_step = 0.0;
  double y = 0.0;

  int nx() const { return static_cast<int>(std::floor((x_max - x_min) / x_step + 1e-9)) + 1; }
  int nz() const { return static_cast<int>(std::floor((z_max - z_min) / z_step + 1e-9)) + 1; }
  double x_at(int col) const { return x_min + col * x_step; }
  double z_at(int row) const { return z_min + row * z_step; }
  Vec3d point(int row, int col) const { return {x_at(col), y, z_at(row)}; }

  std::vector<std::string> check() const {
    std::vector<std::string> errors;
    if (!(x_step > 0.0)) errors.emplace_back("x_step: must be > 0");
    if (!(z_step > 0.0)) errors.emplace_back("z_step: must be > 0");
    if (!(x_max >= x_min)) errors.emplace_back("x_max: must be >= x_min");
    if (!(z_max >= z_min)) errors.emplace_back("z_max: must be >= z_min");
    return errors;
  }
  std::array<Vec3d, 4> corners() const {
    return {Vec3d{x_min, y, z_min}, Vec3d{x_max, y, z_min}, Vec3d{x_min, y, z_max},
            Vec3d{x_max, y, z_max}};
  }
};

inline int channel_index(Pol tx, Pol rx) { return 2 * index_of(tx) + index_of(rx); }

/// Reconstructed image with one complex plane per (tx, rx) channel. Channels
/// that were not imaged are left empty.
template <typename Scalar>
struct ImageGrid {
  ImageGridSpec spec;
  std::array<CMatrix<Scalar>, 4> channels;

  const CMatrix<Scalar>& channel(Pol tx, Pol rx) const { return channels[channel_index(tx, rx)]; }
  CMatrix<Scalar>& channel(Pol tx, Pol rx) { return channels[channel_index(tx, rx)]; }
  bool full_pol() const {
    return std::all_of(channels.begin(), channels.end(), [](const auto& c) { return c.size() > 0; });
  }
};

/// Sum of squared magnitudes over the imaged channels.
template <typename Scalar>
Eigen::MatrixXd combined_power(const ImageGrid<Scalar>& grid) {
  Eigen::MatrixXd power = Eigen::MatrixXd::Zero(grid.spec.nz(), grid.spec.nx());
  for (const auto& ch : grid.channels) {
    if (ch.size() > 0) power += ch.cwiseAbs2().template cast<double>();
  }
  return power;
}

struct GridPeak {
  int row = 0;
  int col = 0;
  double power = 0.0;
};

/// Strict 8-neighbour local maxima at or above rel_threshold * global max,
/// strongest first, at most max_peaks.
inline std::vector<GridPeak> detect_peaks(const Eigen::MatrixXd& power, double rel_threshold,
                                          int max_peaks) {
  std::vector<GridPeak> peaks;
  if (power.size() == 0) return peaks;
  const double floor = rel_threshold * power.maxCoeff();
  if (!(power.maxCoeff() > 0.0)) return peaks;
  const auto rows = power.rows(), cols = power.cols();
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const double v = power(r, c);
      if (v < floor) continue;
      bool is_max = true;
      for (Eigen::Index dr = -1; dr <= 1 && is_max; ++dr) {
        for (Eigen::Index dc = -1; dc <= 1; ++dc) {
          if ((dr == 0 && dc == 0) || r + dr < 0 || r + dr >= rows || c + dc < 0 || c + dc >= cols)
            continue;
          const double n = power(r + dr, c + dc);
          // Ties resolve to the first cell in scan order.
          if (n > v || (n == v && (dr < 0 || (dr == 0 && dc < 0)))) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) peaks.push_back({static_cast<int>(r), static_cast<int>(c), v});
    }
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const GridPeak& a, const GridPeak& b) { return a.power > b.power; });
  if (static_cast<int>(peaks.size()) > max_peaks) peaks.resize(static_cast<std::size_t>(max_peaks));
  return peaks;
}

namespace detail {

template <typename Scalar>
void check_profiles(const std::vector<ElementProfile<Scalar>>& profiles) {
  if (profiles.empty()) throw std::invalid_argument("back-projection needs at least one profile");
  const auto& ref = profiles.front().profile;
  for (const auto& ep : profiles) {
    if (ep.profile.values.size() != ref.values.size() || ep.profile.bin_size_m != ref.bin_size_m)
      throw std::invalid_argument("profiles do not share one chirp configuration");
  }
}

}  // namespace detail

/// Coherent back-projection at one point:
///   I(p) = sum_v P_v(|p - x_v|) exp(+j 2 pi f_v 2 |p - x_v| / c)
template <typename Scalar>
std::complex<Scalar> backproject_point(const std::vector<ElementProfile<Scalar>>& profiles,
                                       const Vec3d& p, Scalar c_mps = Scalar(kSpeedOfLight)) {
  detail::check_profiles(profiles);
  std::complex<Scalar> acc(0);
  for (const auto& ep : profiles) {
    const double r = (p - ep.element.position).norm();
    const double phase = 4.0 * std::numbers::pi * ep.element.carrier_hz * r / double(c_mps);
    acc += sample_profile(ep.profile, Scalar(r)) * std::complex<Scalar>(std::polar(1.0, phase));
  }
  return acc;
}

/// Largest element-to-pixel range over the grid (attained at a corner).
inline double max_grid_range(const std::vector<Vec3d>& elements, const ImageGridSpec& spec) {
  double r = 0.0;
  for (const auto& e : elements)
    for (const auto& c : spec.corners()) r = std::max(r, (c - e).norm());
  return r;
}

/// Back-projects one channel onto the grid (rows z, columns x). Throws
/// ModelError("grid exceeds range support") when any pixel lies beyond a
/// profile's unambiguous range.
template <typename Scalar>
CMatrix<Scalar> backproject(const std::vector<ElementProfile<Scalar>>& profiles,
                            const ImageGridSpec& spec, Scalar c_mps = Scalar(kSpeedOfLight)) {
  detail::check_profiles(profiles);
  if (const auto errors = spec.check(); !errors.empty()) throw std::invalid_argument(errors.front());
  std::vector<Vec3d> positions;
  positions.reserve(profiles.size());
  for (const auto& ep : profiles) positions.push_back(ep.element.position);
  if (max_grid_range(positions, spec) > double(profiles.front().profile.max_range()))
    throw ModelError("grid exceeds range support");

  const int nz = spec.nz(), nx = spec.nx();
  CMatrix<Scalar> image = CMatrix<Scalar>::Zero(nz, nx);
  for (const auto& ep : profiles) {
    const double k = 4.0 * std::numbers::pi * ep.element.carrier_hz / double(c_mps);
    for (int col = 0; col < nx; ++col) {
      for (int row = 0; row < nz; ++row) {
        const double r = (spec.point(row, col) - ep.element.position).norm();
        image(row, col) +=
            sample_profile(ep.profile, Scalar(r)) * std::complex<Scalar>(std::polar(1.0, k * r));
      }
    }
  }
  return image;
}

struct AngularScan {
  double theta_min = -std::numbers::pi / 2;
  double theta_max = std::numbers::pi / 2;
  int n_angles = 721;
  /// Common reference frequency; defaults to the mean element carrier.
  std::optional<double> reference_hz;

  double angle_at(int i) const {
    return n_angles == 1 ? theta_min : theta_min + (theta_max - theta_min) * i / (n_angles - 1);
  }
  double bin_width() const { return n_angles == 1 ? 0.0 : (theta_max - theta_min) / (n_angles - 1); }
};

template <typename Scalar>
struct AngularSpectrum {
  Eigen::VectorXd angles;
  CVector<Scalar> values;

  Eigen::Index peak() const {
    Eigen::Index i = 0;
    values.cwiseAbs().maxCoeff(&i);
    return i;
  }
  double peak_angle() const { return angles[peak()]; }
};

/// Slow-time angular synthesis at one range bin. Each element's sample is
/// compensated to the reference frequency at the bin-center range, then
/// matched against far-field steering phases exp(j 4 pi f_v x_v sin(theta) / c),
/// where x_v is the element offset from the aperture center along the
/// aperture axis and theta is measured from broadside.
/// Throws std::invalid_argument listing absent element indices when the
/// profiles do not cover 0..n_vir-1.
template <typename Scalar>
AngularSpectrum<Scalar> angular_spectrum(const std::vector<ElementProfile<Scalar>>& profiles,
                                         Eigen::Index range_bin, int n_vir,
                                         const AngularScan& scan = {},
                                         Scalar c_mps = Scalar(kSpeedOfLight)) {
  std::vector<const ElementProfile<Scalar>*> by_index(static_cast<std::size_t>(n_vir), nullptr);
  for (const auto& ep : profiles) {
    if (ep.element.index >= 0 && ep.element.index < n_vir)
      by_index[static_cast<std::size_t>(ep.element.index)] = &ep;
  }
  std::string missing;
  for (int v = 0; v < n_vir; ++v) {
    if (!by_index[static_cast<std::size_t>(v)]) missing += (missing.empty() ? "" : ", ") + std::to_string(v);
  }
  if (!missing.empty()) throw std::invalid_argument("missing virtual elements: " + missing);
  detail::check_profiles(profiles);
  const auto& first = by_index.front()->profile;
  if (range_bin < 0 || range_bin >= first.values.size())
    throw std::out_of_range("range bin out of range");

  Vec3d center = Vec3d::Zero();
  double mean_carrier = 0.0;
  for (const auto* ep : by_index) {
    center += ep->element.position;
    mean_carrier += ep->element.carrier_hz;
  }
  center /= n_vir;
  mean_carrier /= n_vir;
  Vec3d axis = Vec3d::UnitX();
  if (n_vir > 1) axis = (by_index.back()->element.position - by_index.front()->element.position).normalized();
  const double f_ref = scan.reference_hz.value_or(mean_carrier);
  const double r_bin = double(first.range_of(range_bin));
  const double c = double(c_mps);

  CVector<Scalar> compensated(n_vir);
  Eigen::VectorXd offsets(n_vir), carriers(n_vir);
  for (int v = 0; v < n_vir; ++v) {
    const auto& ep = *by_index[static_cast<std::size_t>(v)];
    const double phase = 4.0 * std::numbers::pi * (ep.element.carrier_hz - f_ref) * r_bin / c;
    compensated[v] = ep.profile.values[range_bin] * std::complex<Scalar>(std::polar(1.0, phase));
    offsets[v] = (ep.element.position - center).dot(axis);
    carriers[v] = ep.element.carrier_hz;
  }

  AngularSpectrum<Scalar> out;
  out.angles.resize(scan.n_angles);
  out.values = CVector<Scalar>::Zero(scan.n_angles);
  for (int i = 0; i < scan.n_angles; ++i) {
    const double s = std::sin(scan.angle_at(i));
    out.angles[i] = scan.angle_at(i);
    std::complex<Scalar> acc(0);
    for (int v = 0; v < n_vir; ++v) {
      const double phase = -4.0 * std::numbers::pi * carriers[v] * offsets[v] * s / c;
      acc += compensated[v] * std::complex<Scalar>(std::polar(1.0, phase));
    }
    out.values[i] = acc;
  }
  return out;
}

}  // namespace gensense
