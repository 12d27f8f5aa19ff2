#pragma once

#include "shapebp/point_cloud.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace shapebp {

/// A generated cloud with exact ground truth.
struct SyntheticCloud {
  PointCloud cloud;
  LabelMask labels;
  Vec3 viewpoint = Vec3::Zero();
  std::vector<Vec3> true_normals;  ///< analytic surface normal per point
};

/// nx * ny grid in z = 0 starting at the origin, spacing res. Noise displaces
/// points along z. All labels planar; viewpoint 1 m above the grid center.
SyntheticCloud gen_plane(std::size_t nx, std::size_t ny, double res, double noise_sigma, std::uint64_t seed);

/// Lateral surface of a cylinder with axis z from z = 0 to height: round(2 pi R
/// / res) samples per ring, round(height / res) + 1 rings. Noise displaces
/// radially. Labels curved; viewpoint at the axis midpoint.
SyntheticCloud gen_cylinder(double radius, double height, double res, double noise_sigma, std::uint64_t seed);

/// Three orthogonal L x L faces (x = 0, y = 0, z = 0) sharing the origin
/// corner, sampled on a res grid with shared crease points emitted once.
/// Points within 2 * res of a crease are labeled edge, the rest planar.
SyntheticCloud gen_box_scene(double edge_length, double res, double noise_sigma, std::uint64_t seed);

struct PlanePrimitive {
  double extent_x = 0.5;
  double extent_y = 0.5;
  double resolution = 0.004;
  Vec3 center = Vec3::Zero();
};

struct CylinderPrimitive {
  double radius = 0.04;
  double height = 0.12;
  double resolution = 0.004;
  Vec3 base = Vec3::Zero();  ///< center of the bottom ring
};

struct BoxPrimitive {
  double edge_length = 0.1;
  double resolution = 0.001;
};

using Primitive = std::variant<PlanePrimitive, CylinderPrimitive, BoxPrimitive>;

struct SceneSpec {
  std::vector<Primitive> primitives;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  std::optional<Vec3> viewpoint;

  void validate() const;
};

/// Concatenates primitives in order. Plane points that fall inside the
/// footprint of a cylinder standing on them are removed (occluded).
SyntheticCloud generate(const SceneSpec& spec);

/// JSON scene description; throws bad-spec on any structural problem.
SceneSpec parse_scene_spec(const std::string& text);
std::string scene_spec_to_json(const SceneSpec& spec);

/// Plane with upright cylinders: the standard classification scene.
SceneSpec tabletop_scene(double plane_extent, double res, const std::vector<CylinderPrimitive>& cylinders,
                         double noise_sigma, std::uint64_t seed);

}  // namespace shapebp
