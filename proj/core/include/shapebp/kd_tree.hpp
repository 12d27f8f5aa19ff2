#pragma once

#include "shapebp/point_cloud.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace shapebp {

/// Balanced kD-tree over a cloud's points (median split on the widest axis,
/// ties broken by point id). Immutable after construction; concurrent queries
/// are safe.
///
/// Neighbor queries by point id exclude the query point itself. Radius
/// queries use the closed ball: distance <= r.
class KdTree {
 public:
  explicit KdTree(std::span<const Vec3> points, std::size_t leaf_size = 16);
  explicit KdTree(const PointCloud& cloud, std::size_t leaf_size = 16);

  std::size_t size() const noexcept { return points_.size(); }

  std::vector<PointId> radius_neighbors(PointId id, double r) const;
  /// Buffer-reusing variant; `out` is cleared first.
  void radius_neighbors(PointId id, double r, std::vector<PointId>& out) const;

  /// All points within r of an arbitrary location (nothing excluded).
  void radius_search(const Vec3& query, double r, std::vector<PointId>& out) const;

  /// The k closest other points, ascending by (distance, id).
  std::vector<PointId> k_nearest(PointId id, std::size_t k) const;

 private:
  struct Node {
    // Leaf when left == 0 (the root is never a child).
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    double split = 0.0;
    int axis = -1;
  };

  std::uint32_t build(std::uint32_t begin, std::uint32_t end);
  void check_id(PointId id) const;
  void collect_radius(const Vec3& q, double r2, PointId exclude, std::vector<PointId>& out) const;

  std::vector<Vec3> points_;
  std::vector<PointId> order_;
  std::vector<Node> nodes_;
  std::size_t leaf_size_;
};

/// O(n) reference implementation of KdTree::radius_neighbors.
std::vector<PointId> brute_force_radius(const PointCloud& cloud, PointId id, double r);

}  // namespace shapebp
