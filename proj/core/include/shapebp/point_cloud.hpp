#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace shapebp {

using Vec3 = Eigen::Vector3d;
using PointId = std::uint32_t;

/// Unorganized point cloud. `normals` is either empty or index-aligned with
/// `points`; `valid[i]` marks whether `normals[i]` is usable.
struct PointCloud {
  std::vector<Vec3> points;
  std::vector<Vec3> normals;
  std::vector<std::uint8_t> valid;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
  bool has_normals() const noexcept { return !normals.empty(); }
};

enum class Label : std::uint8_t {
  planar = 0,
  curved = 1,
  edge = 2,
  unlabeled = 255,
};

using LabelMask = std::vector<Label>;

std::optional<Label> label_from_id(int id) noexcept;
const char* label_name(Label label) noexcept;

// Squared Euclidean distance with a fixed evaluation order. Every neighbor
// query (tree and brute force) goes through this so that ties at exactly r
// resolve identically.
inline double squared_distance(const Vec3& a, const Vec3& b) noexcept {
  const double dx = a.x() - b.x();
  const double dy = a.y() - b.y();
  const double dz = a.z() - b.z();
  return dx * dx + dy * dy + dz * dz;
}

}  // namespace shapebp
