#include "shapebp/normals.hpp"

#include "shapebp/eigen3x3.hpp"
#include "shapebp/error.hpp"
#include "shapebp/parallel.hpp"

#include <algorithm>

namespace shapebp {

std::size_t NormalField::valid_count() const noexcept {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), std::uint8_t{1}));
}

NormalField NormalField::from_cloud(const PointCloud& cloud) {
  if (!cloud.has_normals()) throw Error(Errc::invalid_argument, "cloud carries no normals");
  NormalField field;
  field.normals = cloud.normals;
  field.valid = cloud.valid;
  return field;
}

NormalField estimate_all_normals(const PointCloud& cloud, const KdTree& index, const NormalParams& params) {
  if (cloud.empty()) throw Error(Errc::empty_cloud, "normal estimation on an empty cloud");
  if (!(params.radius > 0.0)) throw Error(Errc::non_positive_radius, "normal radius must be > 0");
  if (params.min_neighbors < 3) throw Error(Errc::invalid_argument, "min_neighbors must be >= 3");
  if (index.size() != cloud.size()) throw Error(Errc::length_mismatch, "index was built for another cloud");

  NormalField field;
  field.normals.assign(cloud.size(), Vec3::Zero());
  field.valid.assign(cloud.size(), 0);
  field.radius = params.radius;
  field.viewpoint = params.viewpoint;

  parallel_for(cloud.size(), params.threads, [&](std::size_t begin, std::size_t end) {
    std::vector<PointId> neighbors;
    for (std::size_t i = begin; i < end; ++i) {
      const auto id = static_cast<PointId>(i);
      index.radius_neighbors(id, params.radius, neighbors);
      if (neighbors.size() < params.min_neighbors) continue;
      const auto eig = smallest_eigen(covariance(cloud.points, id, neighbors));
      // Rank < 2: coincident or collinear neighborhood, normal undefined.
      if (!(eig.values[1] > 1e-12 * eig.values[2])) continue;
      Vec3 n = eig.vector;
      if ((params.viewpoint - cloud.points[i]).dot(n) < 0.0) n = -n;
      field.normals[i] = n;
      field.valid[i] = 1;
    }
  });
  return field;
}

void attach_normals(PointCloud& cloud, const NormalField& field) {
  if (field.size() != cloud.size()) throw Error(Errc::length_mismatch, "normal field size differs from cloud");
  cloud.normals = field.normals;
  cloud.valid = field.valid;
}

}  // namespace shapebp
