#include "shapebp/kd_tree.hpp"

#include "shapebp/error.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <string>

namespace shapebp {

namespace {

constexpr PointId kNoExclude = std::numeric_limits<PointId>::max();

void check_radius(double r) {
  if (!(r > 0.0)) throw Error(Errc::non_positive_radius, "radius must be > 0, got " + std::to_string(r));
}

}  // namespace

KdTree::KdTree(std::span<const Vec3> points, std::size_t leaf_size)
    : points_(points.begin(), points.end()), leaf_size_(std::max<std::size_t>(leaf_size, 1)) {
  if (points_.empty()) throw Error(Errc::empty_cloud, "cannot index an empty cloud");
  if (points_.size() >= kNoExclude) throw Error(Errc::invalid_argument, "cloud too large for 32-bit ids");
  order_.resize(points_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = static_cast<PointId>(i);
  nodes_.reserve(2 * points_.size() / leaf_size_ + 1);
  build(0, static_cast<std::uint32_t>(order_.size()));
}

KdTree::KdTree(const PointCloud& cloud, std::size_t leaf_size) : KdTree(std::span<const Vec3>(cloud.points), leaf_size) {}

std::uint32_t KdTree::build(std::uint32_t begin, std::uint32_t end) {
  const auto index = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back({begin, end, 0, 0, 0.0, -1});
  if (end - begin <= leaf_size_) return index;

  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  for (std::uint32_t i = begin; i < end; ++i) {
    lo = lo.cwiseMin(points_[order_[i]]);
    hi = hi.cwiseMax(points_[order_[i]]);
  }
  int axis = 0;
  (hi - lo).maxCoeff(&axis);
  if (hi[axis] == lo[axis]) return index;  // all coincident

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](PointId a, PointId b) {
                     const double ca = points_[a][axis];
                     const double cb = points_[b][axis];
                     return ca < cb || (ca == cb && a < b);
                   });
  const double split = points_[order_[mid]][axis];
  const std::uint32_t left = build(begin, mid);
  const std::uint32_t right = build(mid, end);
  auto& node = nodes_[index];
  node.axis = axis;
  node.split = split;
  node.left = left;
  node.right = right;
  return index;
}

void KdTree::check_id(PointId id) const {
  if (id >= points_.size()) {
    throw Error(Errc::invalid_id, "point id " + std::to_string(id) + " out of range [0, " +
                                      std::to_string(points_.size()) + ")");
  }
}

void KdTree::collect_radius(const Vec3& q, double r2, PointId exclude, std::vector<PointId>& out) const {
  std::uint32_t stack[128];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (node.left == 0) {
      for (std::uint32_t i = node.begin; i < node.end; ++i) {
        const PointId id = order_[i];
        if (id != exclude && squared_distance(points_[id], q) <= r2) out.push_back(id);
      }
      continue;
    }
    // Left holds coordinates <= split, right holds >= split.
    const double diff = q[node.axis] - node.split;
    const bool far_ok = diff * diff <= r2;
    if (diff <= 0.0) {
      if (far_ok) stack[top++] = node.right;
      stack[top++] = node.left;
    } else {
      if (far_ok) stack[top++] = node.left;
      stack[top++] = node.right;
    }
  }
}

std::vector<PointId> KdTree::radius_neighbors(PointId id, double r) const {
  std::vector<PointId> out;
  radius_neighbors(id, r, out);
  return out;
}

void KdTree::radius_neighbors(PointId id, double r, std::vector<PointId>& out) const {
  check_id(id);
  check_radius(r);
  out.clear();
  collect_radius(points_[id], r * r, id, out);
}

void KdTree::radius_search(const Vec3& query, double r, std::vector<PointId>& out) const {
  check_radius(r);
  out.clear();
  collect_radius(query, r * r, kNoExclude, out);
}

std::vector<PointId> KdTree::k_nearest(PointId id, std::size_t k) const {
  check_id(id);
  if (k == 0) throw Error(Errc::invalid_argument, "k must be >= 1");
  k = std::min(k, points_.size() - 1);
  if (k == 0) return {};

  using Entry = std::pair<double, PointId>;  // max-heap on (d2, id)
  std::priority_queue<Entry> heap;
  const Vec3& q = points_[id];
  auto worst = [&] { return heap.size() < k ? std::numeric_limits<double>::infinity() : heap.top().first; };

  std::uint32_t stack[128];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (node.left == 0) {
      for (std::uint32_t i = node.begin; i < node.end; ++i) {
        const PointId other = order_[i];
        if (other == id) continue;
        const Entry e{squared_distance(points_[other], q), other};
        if (heap.size() < k) {
          heap.push(e);
        } else if (e < heap.top()) {
          heap.pop();
          heap.push(e);
        }
      }
      continue;
    }
    const double diff = q[node.axis] - node.split;
    // Pushed first means visited last; <= keeps equal-distance ties reachable.
    const std::uint32_t near = diff <= 0.0 ? node.left : node.right;
    const std::uint32_t far = diff <= 0.0 ? node.right : node.left;
    if (diff * diff <= worst()) stack[top++] = far;
    stack[top++] = near;
  }
  // Far subtrees were queued with the bound at push time; anything they add is
  // re-filtered by the heap, so the result is exact.
  std::vector<PointId> out(heap.size());
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = heap.top().second;
    heap.pop();
  }
  return out;
}

std::vector<PointId> brute_force_radius(const PointCloud& cloud, PointId id, double r) {
  if (id >= cloud.size()) {
    throw Error(Errc::invalid_id, "point id " + std::to_string(id) + " out of range");
  }
  check_radius(r);
  const double r2 = r * r;
  std::vector<PointId> out;
  const Vec3& q = cloud.points[id];
  for (std::size_t j = 0; j < cloud.size(); ++j) {
    if (j != id && squared_distance(cloud.points[j], q) <= r2) out.push_back(static_cast<PointId>(j));
  }
  return out;
}

}  // namespace shapebp
