#include "shapebp/eigen3x3.hpp"

#include "shapebp/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace shapebp {

Eigen::Matrix3d SymMat3::to_matrix() const {
  Eigen::Matrix3d m;
  m << xx, xy, xz, xy, yy, yz, xz, yz, zz;
  return m;
}

SymMat3 SymMat3::from_matrix(const Eigen::Matrix3d& m) {
  return {m(0, 0), m(0, 1), m(0, 2), m(1, 1), m(1, 2), m(2, 2)};
}

namespace {

template <class PointAt>
SymMat3 covariance_impl(std::size_t n, PointAt&& at) {
  Vec3 centroid = Vec3::Zero();
  for (std::size_t i = 0; i < n; ++i) centroid += at(i);
  centroid /= static_cast<double>(n);
  SymMat3 c;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 d = at(i) - centroid;
    c.xx += d.x() * d.x();
    c.xy += d.x() * d.y();
    c.xz += d.x() * d.z();
    c.yy += d.y() * d.y();
    c.yz += d.y() * d.z();
    c.zz += d.z() * d.z();
  }
  const double inv = 1.0 / static_cast<double>(n);
  c.xx *= inv;
  c.xy *= inv;
  c.xz *= inv;
  c.yy *= inv;
  c.yz *= inv;
  c.zz *= inv;
  return c;
}

double max_abs_entry(const SymMat3& m) {
  return std::max({std::abs(m.xx), std::abs(m.xy), std::abs(m.xz), std::abs(m.yy), std::abs(m.yz),
                   std::abs(m.zz)});
}

SmallestEigen from_jacobi(const SymMat3& m) {
  const auto j = jacobi_eigen(m);
  SmallestEigen out;
  out.values = j.values;
  out.vector = j.vectors.col(0).normalized();
  return out;
}

}  // namespace

SymMat3 covariance(std::span<const Vec3> points) {
  if (points.size() < 3) throw Error(Errc::too_few_points, "covariance needs at least 3 points");
  return covariance_impl(points.size(), [&](std::size_t i) -> const Vec3& { return points[i]; });
}

SymMat3 covariance(const std::vector<Vec3>& cloud, PointId center, std::span<const PointId> neighbors) {
  if (neighbors.size() + 1 < 3) throw Error(Errc::too_few_points, "covariance needs at least 3 points");
  return covariance_impl(neighbors.size() + 1, [&](std::size_t i) -> const Vec3& {
    return i == 0 ? cloud[center] : cloud[neighbors[i - 1]];
  });
}

SmallestEigen smallest_eigen(const SymMat3& m) {
  const double scale = max_abs_entry(m);
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    SmallestEigen zero;
    zero.values = {0.0, 0.0, 0.0};
    return zero;
  }
  // Work on a unit-scale copy so thresholds are relative.
  const double s = 1.0 / scale;
  const double a00 = m.xx * s, a01 = m.xy * s, a02 = m.xz * s;
  const double a11 = m.yy * s, a12 = m.yz * s, a22 = m.zz * s;

  const double q = (a00 + a11 + a22) / 3.0;
  const double b00 = a00 - q, b11 = a11 - q, b22 = a22 - q;
  const double off = a01 * a01 + a02 * a02 + a12 * a12;
  const double p = std::sqrt((b00 * b00 + b11 * b11 + b22 * b22 + 2.0 * off) / 6.0);
  if (p < 1e-6) return from_jacobi(m);  // (near) multiple of identity

  const double det = b00 * (b11 * b22 - a12 * a12) - a01 * (a01 * b22 - a12 * a02) + a02 * (a01 * a12 - b11 * a02);
  const double half_det = std::clamp(det / (2.0 * p * p * p), -1.0, 1.0);
  const double phi = std::acos(half_det) / 3.0;
  const double largest = q + 2.0 * p * std::cos(phi);
  const double smallest = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  const double middle = 3.0 * q - largest - smallest;

  if (middle - smallest < 1e-6) return from_jacobi(m);  // trig roots carry ~sqrt(eps) error near a double root

  const Vec3 r0(a00 - smallest, a01, a02);
  const Vec3 r1(a01, a11 - smallest, a12);
  const Vec3 r2(a02, a12, a22 - smallest);
  const Vec3 c01 = r0.cross(r1);
  const Vec3 c02 = r0.cross(r2);
  const Vec3 c12 = r1.cross(r2);
  const double n01 = c01.squaredNorm(), n02 = c02.squaredNorm(), n12 = c12.squaredNorm();
  Vec3 v;
  double best;
  if (n01 >= n02 && n01 >= n12) {
    v = c01;
    best = n01;
  } else if (n02 >= n12) {
    v = c02;
    best = n02;
  } else {
    v = c12;
    best = n12;
  }
  if (!(best > 1e-24)) return from_jacobi(m);

  SmallestEigen out;
  out.values = {smallest * scale, middle * scale, largest * scale};
  out.vector = v / std::sqrt(best);
  return out;
}

Vec3 smallest_eigenvector(const SymMat3& m) { return smallest_eigen(m).vector; }

JacobiResult jacobi_eigen(const SymMat3& m, double tolerance, int max_sweeps) {
  Eigen::Matrix3d a = m.to_matrix();
  Eigen::Matrix3d v = Eigen::Matrix3d::Identity();
  const double norm = a.norm();
  JacobiResult result;
  if (norm > 0.0) {
    for (; result.sweeps < max_sweeps; ++result.sweeps) {
      const double offdiag = std::sqrt(2.0 * (a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2)));
      if (offdiag <= tolerance * norm) break;
      for (int p = 0; p < 2; ++p) {
        for (int q = p + 1; q < 3; ++q) {
          if (a(p, q) == 0.0) continue;
          const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
          const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          const double c = 1.0 / std::sqrt(t * t + 1.0);
          const double sn = t * c;
          Eigen::Matrix3d rot = Eigen::Matrix3d::Identity();
          rot(p, p) = c;
          rot(q, q) = c;
          rot(p, q) = sn;
          rot(q, p) = -sn;
          a = rot.transpose() * a * rot;
          a(p, q) = a(q, p) = 0.0;
          v = v * rot;
        }
      }
    }
  }
  std::array<int, 3> idx{0, 1, 2};
  std::sort(idx.begin(), idx.end(), [&](int i, int j) { return a(i, i) < a(j, j); });
  for (int i = 0; i < 3; ++i) {
    result.values[i] = a(idx[i], idx[i]);
    result.vectors.col(i) = v.col(idx[i]);
  }
  return result;
}

}  // namespace shapebp
