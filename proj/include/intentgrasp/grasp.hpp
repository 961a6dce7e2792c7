// Copyright 2026 The IntentGrasp Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Region -> 3D grasp point: segment the cloud by pixel correspondence, fit
// and drop the dominant plane, average what remains.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "intentgrasp/errors.hpp"
#include "intentgrasp/random.hpp"
#include "intentgrasp/world.hpp"

namespace intentgrasp {

template <typename Scalar>
struct PlaneModel {
  using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

  /// Unit normal, oriented so that its first nonzero of (z, y, x) is positive.
  Vector3 normal = Vector3::UnitZ();
  Scalar offset = Scalar(0);
  Eigen::Index inlier_count = 0;

  template <typename Derived>
  Scalar distance(const Eigen::MatrixBase<Derived>& p) const {
    return normal.dot(p) + offset;
  }
};

struct RansacParams {
  int iterations = 200;
  double inlier_tol = 0.005;
  Eigen::Index min_remaining = 10;
  std::uint64_t seed = 0;

  void validate() const {
    if (iterations < 1) throw Error(ErrorKind::kInvalidArgument, "iterations must be >= 1");
    if (!(inlier_tol > 0.0)) throw Error(ErrorKind::kInvalidArgument, "inlier_tol must be > 0");
    if (min_remaining < 1) throw Error(ErrorKind::kInvalidArgument, "min_remaining must be >= 1");
  }
};

template <typename Scalar>
struct PlaneFit {
  PlaneModel<Scalar> plane;
  std::vector<bool> inliers;
};

template <typename Scalar>
struct GraspTargetT {
  Eigen::Matrix<Scalar, 3, 1> position;
  Eigen::Index points_used = 0;
};

using GraspTarget = GraspTargetT<double>;

/// Points whose pixel correspondence lies inside `box` (half-open).
template <typename Scalar>
PointCloudT<Scalar> segment_region_points(const PointCloudT<Scalar>& cloud,
                                          const RegionBox& box) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < cloud.size(); ++i)
    if (box.contains_pixel(cloud.pixel_map(0, i), cloud.pixel_map(1, i))) keep.push_back(i);

  PointCloudT<Scalar> out;
  out.points.resize(3, Eigen::Index(keep.size()));
  out.pixel_map.resize(2, Eigen::Index(keep.size()));
  const bool labelled = cloud.labels.size() == std::size_t(cloud.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    out.points.col(Eigen::Index(k)) = cloud.points.col(keep[k]);
    out.pixel_map.col(Eigen::Index(k)) = cloud.pixel_map.col(keep[k]);
    if (labelled) out.labels.push_back(cloud.labels[std::size_t(keep[k])]);
  }
  return out;
}

/// Classic three-point RANSAC: the hypothesis with the most points within
/// inlier_tol wins; earlier hypotheses win ties.
template <typename Scalar>
PlaneFit<Scalar> ransac_plane(const Eigen::Matrix<Scalar, 3, Eigen::Dynamic>& points,
                              const RansacParams& params) {
  using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
  params.validate();
  const Eigen::Index n = points.cols();
  if (n < 3) throw Error(ErrorKind::kDegenerateGeometry, "degenerate geometry: fewer than 3 points");

  Rng rng(mix_seed(params.seed, 0x9A7));
  const Scalar tol = Scalar(params.inlier_tol);
  PlaneModel<Scalar> best;
  bool found = false;

  for (int it = 0; it < params.iterations; ++it) {
    const auto i = Eigen::Index(uniform_index(rng, std::size_t(n)));
    auto j = Eigen::Index(uniform_index(rng, std::size_t(n - 1)));
    if (j >= i) ++j;
    auto k = Eigen::Index(uniform_index(rng, std::size_t(n - 2)));
    if (k >= std::min(i, j)) ++k;
    if (k >= std::max(i, j)) ++k;

    const Vector3 a = points.col(i);
    Vector3 normal = (points.col(j) - a).cross(points.col(k) - a);
    const Scalar norm = normal.norm();
    const Scalar scale = (points.col(j) - a).norm() * (points.col(k) - a).norm();
    if (!(norm > Scalar(1e-12) * std::max(scale, Scalar(1e-300)))) continue;  // collinear
    normal /= norm;
    const Scalar offset = -normal.dot(a);

    const auto residual = ((normal.transpose() * points).array() + offset).abs();
    const Eigen::Index count = (residual <= tol).count();
    if (!found || count > best.inlier_count) {
      best.normal = normal;
      best.offset = offset;
      best.inlier_count = count;
      found = true;
    }
  }
  if (!found)
    throw Error(ErrorKind::kDegenerateGeometry,
                "degenerate geometry: every sampled triple was collinear");

  // Canonical orientation.
  const Scalar lead = best.normal.z() != Scalar(0)   ? best.normal.z()
                      : best.normal.y() != Scalar(0) ? best.normal.y()
                                                     : best.normal.x();
  if (lead < Scalar(0)) {
    best.normal = -best.normal;
    best.offset = -best.offset;
  }

  PlaneFit<Scalar> fit{best, std::vector<bool>(std::size_t(n), false)};
  Eigen::Index count = 0;
  for (Eigen::Index p = 0; p < n; ++p) {
    const bool in = std::abs(best.distance(points.col(p))) <= tol;
    fit.inliers[std::size_t(p)] = in;
    count += in;
  }
  fit.plane.inlier_count = count;
  return fit;
}

/// Arithmetic mean of the columns.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 1> mean_point(const Eigen::Matrix<Scalar, 3, Eigen::Dynamic>& points) {
  return points.rowwise().mean();
}

/// Segment, remove the table plane, average the rest.
template <typename Scalar>
GraspTargetT<Scalar> grasp_target(const PointCloudT<Scalar>& cloud, const RegionBox& box,
                                  const RansacParams& params) {
  const PointCloudT<Scalar> segment = segment_region_points(cloud, box);
  if (segment.size() == 0) throw Error(ErrorKind::kEmptyRegion, "empty region: no points inside the box");

  const PlaneFit<Scalar> fit = ransac_plane<Scalar>(segment.points, params);
  const Eigen::Index remaining = segment.size() - fit.plane.inlier_count;
  if (remaining < params.min_remaining)
    throw Error(ErrorKind::kObjectNotFound,
                "object not found above plane: " + std::to_string(remaining) +
                    " points remain after plane removal");

  Eigen::Matrix<Scalar, 3, Eigen::Dynamic> rest(3, remaining);
  Eigen::Index c = 0;
  for (Eigen::Index p = 0; p < segment.size(); ++p)
    if (!fit.inliers[std::size_t(p)]) rest.col(c++) = segment.points.col(p);
  return {mean_point<Scalar>(rest), remaining};
}

}  // namespace intentgrasp
