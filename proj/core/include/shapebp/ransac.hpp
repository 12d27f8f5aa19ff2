#pragma once

#include "shapebp/normals.hpp"
#include "shapebp/point_cloud.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace shapebp {

enum class RansacModelKind { plane, cylinder };

RansacModelKind parse_model_kind(const std::string& name);
const char* to_string(RansacModelKind kind) noexcept;

struct RansacConfig {
  RansacModelKind model = RansacModelKind::plane;
  double inlier_threshold = 0.003;  ///< m
  std::size_t max_iterations = 1000;
  std::size_t min_inliers = 50;
  std::uint64_t seed = 0;
  /// Cylinder inliers must have a normal within this angle of the radial
  /// direction; <= 0 disables the check.
  double normal_threshold_deg = 15.0;
  double min_radius = 0.0;
  double max_radius = std::numeric_limits<double>::infinity();
  unsigned threads = 1;

  void validate() const;
};

struct PlaneModel {
  Vec3 normal = Vec3::UnitZ();  ///< unit
  double offset = 0.0;          ///< normal . p + offset = 0

  double distance(const Vec3& p) const noexcept { return std::abs(normal.dot(p) + offset); }
};

struct CylinderModel {
  Vec3 axis_point = Vec3::Zero();
  Vec3 axis = Vec3::UnitZ();  ///< unit
  double radius = 0.0;

  Vec3 radial(const Vec3& p) const noexcept;  ///< from the axis to p, unnormalized
  double distance(const Vec3& p) const noexcept { return std::abs(radial(p).norm() - radius); }
};

using RansacModel = std::variant<PlaneModel, CylinderModel>;

std::optional<PlaneModel> plane_from_points(const Vec3& a, const Vec3& b, const Vec3& c);
/// Axis direction from n1 x n2, axis position from the closest points of the
/// two normal lines. Empty for (near-)parallel normals.
std::optional<CylinderModel> cylinder_from_oriented_points(const Vec3& p1, const Vec3& n1, const Vec3& p2,
                                                           const Vec3& n2);

struct RansacResult {
  RansacModel model;
  std::vector<PointId> inliers;  ///< ascending
  std::size_t iteration = 0;     ///< index of the winning hypothesis
};

/// Best model by inlier count over max_iterations hypotheses; ties go to the
/// earliest hypothesis. Throws insufficient-points and no-model-found.
RansacResult ransac_fit(const PointCloud& cloud, const NormalField& normals, const RansacConfig& config);
/// Restricts sampling and consensus to `candidates`.
RansacResult ransac_fit(const PointCloud& cloud, const NormalField& normals, const RansacConfig& config,
                        std::span<const PointId> candidates);

/// Repeated fits with inliers removed between rounds; stops early when a
/// round finds no model. A failing first round throws. Inlier sets are
/// pairwise disjoint.
std::vector<RansacResult> extract_instances(const PointCloud& cloud, const NormalField& normals,
                                            const RansacConfig& config, std::size_t n_instances);

/// Labels the union of inliers with `label`, everything else with `other`.
LabelMask instances_to_mask(std::size_t n, const std::vector<RansacResult>& instances, Label label, Label other);

}  // namespace shapebp
