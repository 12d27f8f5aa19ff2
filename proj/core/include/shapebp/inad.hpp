#pragma once

#include "shapebp/kd_tree.hpp"
#include "shapebp/normals.hpp"
#include "shapebp/point_cloud.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace shapebp {

/// Inter-normal-angle-difference statistics at one point, in degrees.
/// mu is in [0, 90] and sigma in [0, 45] because angles are folded.
struct InadPair {
  double mu = 0.0;
  double sigma = 0.0;
  std::uint32_t inlier_count = 0;
};

struct InadParams {
  double radius = 0.01;
  double outlier_rate = 1.0;
  unsigned threads = 1;
};

struct InadField {
  std::vector<InadPair> pairs;
  std::vector<std::uint8_t> valid;
  double radius = 0.0;
  double outlier_rate = 0.0;

  std::size_t size() const noexcept { return pairs.size(); }
  std::size_t valid_count() const noexcept;
};

/// Maps an angle between undirected normals to [0, 90]: min(a, 180 - a).
double fold_angle(double degrees) noexcept;

/// Folded angles between the center normal and every neighbor with a valid
/// normal. Throws invalid-center-normal if the center normal is invalid.
void inter_normal_angles(const NormalField& normals, PointId center, std::span<const PointId> neighbors,
                         std::vector<double>& out);
std::vector<double> inter_normal_angles(const NormalField& normals, PointId center,
                                        std::span<const PointId> neighbors);

/// One rejection pass: keep a with |a - mu| / sigma <= c, where mu and sigma
/// are taken over the whole input. Everything is kept when sigma < 1e-9, and
/// the value closest to mu is kept if nothing else survives.
std::vector<double> reject_outliers(std::span<const double> alphas, double outlier_rate);
/// In-place variant used by the per-point kernel.
void reject_outliers_in_place(std::vector<double>& alphas, double outlier_rate);

/// Mean and population standard deviation.
InadPair inad_pair(std::span<const double> alphas);

/// angles -> reject_outliers -> inad_pair for one point with a fixed neighbor
/// list. `scratch` is reused across calls. Returns false when the point has
/// no usable angles.
bool inad_at(const NormalField& normals, PointId center, std::span<const PointId> neighbors,
             double outlier_rate, std::vector<double>& scratch, InadPair& out);

InadField compute_inad_field(const PointCloud& cloud, const NormalField& normals, const KdTree& index,
                             const InadParams& params);

/// CSV with header "point_id,mu,sigma,valid".
void write_inad_csv(const InadField& field, const std::filesystem::path& path);

}  // namespace shapebp
