#pragma once

#include "shapebp/point_cloud.hpp"

#include <Eigen/Core>

#include <array>
#include <span>

namespace shapebp {

/// Symmetric 3x3 matrix stored by its six unique entries.
struct SymMat3 {
  double xx = 0, xy = 0, xz = 0, yy = 0, yz = 0, zz = 0;

  Eigen::Matrix3d to_matrix() const;
  static SymMat3 from_matrix(const Eigen::Matrix3d& m);
};

/// Covariance about the centroid, normalized by the number of points.
/// Throws too-few-points for fewer than 3 points.
SymMat3 covariance(std::span<const Vec3> points);

/// Covariance of {center} plus the given neighbors, without copying points.
SymMat3 covariance(const std::vector<Vec3>& cloud, PointId center, std::span<const PointId> neighbors);

struct SmallestEigen {
  std::array<double, 3> values{};  ///< ascending
  Vec3 vector = Vec3::UnitZ();     ///< unit eigenvector of values[0]
};

/// Closed-form eigenvalues of a symmetric 3x3 matrix with the eigenvector of
/// the smallest one taken from the cross products of rows of (M - lambda I).
/// Falls back to cyclic Jacobi when the two smallest eigenvalues are closer
/// than 1e-6 relative to the matrix scale.
SmallestEigen smallest_eigen(const SymMat3& m);
Vec3 smallest_eigenvector(const SymMat3& m);

struct JacobiResult {
  std::array<double, 3> values{};  ///< ascending
  Eigen::Matrix3d vectors;         ///< column i pairs with values[i]
  int sweeps = 0;
};

/// Cyclic Jacobi rotations; stops when the off-diagonal mass drops below
/// `tolerance` times the Frobenius norm, or after `max_sweeps`.
JacobiResult jacobi_eigen(const SymMat3& m, double tolerance = 1e-12, int max_sweeps = 50);

}  // namespace shapebp
