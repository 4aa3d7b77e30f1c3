// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gensense/types.hpp>

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

namespace gensense {

/// 2x2 polarimetric scattering matrix indexed (rx, tx) with H = 0, V = 1,
/// i.e. [[S_HH, S_HV], [S_VH, S_VV]].
template <typename Scalar>
using ScatteringMatrix = Eigen::Matrix<std::complex<Scalar>, 2, 2>;

template <typename Scalar>
inline std::complex<Scalar> channel(const ScatteringMatrix<Scalar>& s, Pol tx, Pol rx) {
  return s(index_of(rx), index_of(tx));
}

template <typename Scalar>
struct PointScatterer {
  Vec3<Scalar> position = Vec3<Scalar>::Zero();
  ScatteringMatrix<Scalar> scattering = ScatteringMatrix<Scalar>::Zero();
};

template <typename Scalar>
struct Scene {
  std::string name;
  std::vector<PointScatterer<Scalar>> scatterers;
  /// Monostatic reciprocity: S_HV must equal S_VH for every scatterer.
  bool reciprocal = false;
  /// Scale amplitudes by 1/R^2 per element-scatterer pair.
  bool spreading_loss = false;
};

using Scened = Scene<double>;
using PointScattererd = PointScatterer<double>;
using ScatteringMatrixd = ScatteringMatrix<double>;

/// Exact near-field Euclidean range between a scatterer and a radiating element.
template <typename Scalar>
Scalar range_to(const Vec3<Scalar>& scatterer, const Vec3<Scalar>& element) {
  if (!scatterer.allFinite() || !element.allFinite()) throw ModelError("non-finite position");
  const Scalar r = (scatterer - element).norm();
  if (!(r > Scalar(0))) throw ModelError("zero range");
  return r;
}

template <typename Scalar>
Scalar range_to(const PointScatterer<Scalar>& scatterer, const Vec3<Scalar>& element) {
  return range_to<Scalar>(scatterer.position, element);
}

/// Returns an error message for the first scatterer violating the scene invariants.
template <typename Scalar>
std::optional<std::string> check_scene(const Scene<Scalar>& scene) {
  for (std::size_t i = 0; i < scene.scatterers.size(); ++i) {
    const auto& sc = scene.scatterers[i];
    const std::string where = "scatterer " + std::to_string(i) + ": ";
    if (!sc.position.allFinite()) return where + "non-finite position";
    if (!sc.scattering.allFinite()) return where + "non-finite scattering matrix";
    if (!(sc.scattering.norm() > Scalar(0))) return where + "zero scattering matrix";
    if (scene.reciprocal && sc.scattering(0, 1) != sc.scattering(1, 0))
      return where + "violates reciprocity (S_HV != S_VH)";
  }
  return std::nullopt;
}

/// One row of the ground-truth listing: range from the aperture center,
/// signed cross-range along the aperture axis, and the true scattering matrix.
template <typename Scalar>
struct GroundTruthRow {
  Vec3<Scalar> position;
  Scalar range_m;
  Scalar cross_range_m;
  ScatteringMatrix<Scalar> scattering;
};

template <typename Scalar>
std::vector<GroundTruthRow<Scalar>> ground_truth_report(const Scene<Scalar>& scene,
                                                        const Vec3<Scalar>& aperture_center,
                                                        const Vec3<Scalar>& aperture_direction) {
  const Vec3<Scalar> axis = aperture_direction.normalized();
  std::vector<GroundTruthRow<Scalar>> rows;
  rows.reserve(scene.scatterers.size());
  for (const auto& sc : scene.scatterers) {
    const Vec3<Scalar> rel = sc.position - aperture_center;
    rows.push_back({sc.position, rel.norm(), rel.dot(axis), sc.scattering});
  }
  return rows;
}

}  // namespace gensense
