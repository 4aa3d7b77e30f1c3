// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gensense {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
using CVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using CMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

using Vec3d = Vec3<double>;
using CVectord = CVector<double>;
using CMatrixd = CMatrix<double>;

inline constexpr double kSpeedOfLight = 299'792'458.0;
inline constexpr double kSpeedOfLightRounded = 3.0e8;

/// Linear polarization state of a transmit or receive port.
enum class Pol : std::uint8_t { H = 0, V = 1 };

inline constexpr std::string_view to_string(Pol p) { return p == Pol::H ? "H" : "V"; }

inline Pol pol_from_string(std::string_view s) {
  if (s == "H" || s == "h") return Pol::H;
  if (s == "V" || s == "v") return Pol::V;
  throw std::invalid_argument("unknown polarization '" + std::string(s) + "'");
}

inline constexpr int index_of(Pol p) { return static_cast<int>(p); }

/// Raised when geometry or signal inputs cannot be evaluated (e.g. zero range).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gensense
