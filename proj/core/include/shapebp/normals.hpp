#pragma once

#include "shapebp/kd_tree.hpp"
#include "shapebp/point_cloud.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace shapebp {

struct NormalParams {
  double radius = 0.01;
  Vec3 viewpoint = Vec3::Zero();
  std::size_t min_neighbors = 5;
  unsigned threads = 1;
};

struct NormalField {
  std::vector<Vec3> normals;
  std::vector<std::uint8_t> valid;
  double radius = 0.0;
  Vec3 viewpoint = Vec3::Zero();

  std::size_t size() const noexcept { return normals.size(); }
  std::size_t valid_count() const noexcept;

  /// Wraps normals carried by a cloud (e.g. loaded from file).
  static NormalField from_cloud(const PointCloud& cloud);
};

/// Per point: smallest-eigenvalue eigenvector of the covariance of the point
/// and its radius neighbors, flipped so that dot(viewpoint - p, n) >= 0.
/// Points with fewer than min_neighbors neighbors, or whose neighborhood
/// spans fewer than two dimensions, are flagged invalid.
NormalField estimate_all_normals(const PointCloud& cloud, const KdTree& index, const NormalParams& params);

/// Copies a normal field into the cloud's normal channel.
void attach_normals(PointCloud& cloud, const NormalField& field);

}  // namespace shapebp
