#include "test_util.hpp"

#include <shapebp/normals.hpp>
#include <shapebp/synth.hpp>

#include <cmath>
#include <numbers>

using namespace shapebp;

namespace {

double angle_deg(const Vec3& a, const Vec3& b) {
  return std::acos(std::clamp(a.normalized().dot(b.normalized()), -1.0, 1.0)) * 180.0 / std::numbers::pi;
}

}  // namespace

TEST_CASE("plane normals point at the viewpoint") {
  const SyntheticCloud s = gen_plane(30, 30, 0.001, 0.0, 1);
  const KdTree t(s.cloud);
  const NormalField f = estimate_all_normals(s.cloud, t, {0.003, Vec3(0.01, 0.01, 1.0), 5, 1});
  REQUIRE(f.valid_count() == s.cloud.size());
  for (std::size_t i = 0; i < f.size(); ++i) CHECK((f.normals[i] - Vec3::UnitZ()).norm() <= 1e-6);

  const NormalField below = estimate_all_normals(s.cloud, t, {0.003, Vec3(0.01, 0.01, -1.0), 5, 1});
  for (std::size_t i = 0; i < below.size(); ++i) CHECK((below.normals[i] + Vec3::UnitZ()).norm() <= 1e-6);
}

TEST_CASE("cylinder normals are radial within 2 degrees for r <= R/5") {
  const double R = 0.05;
  const SyntheticCloud s = gen_cylinder(R, 0.06, 0.001, 0.0, 1);
  const KdTree t(s.cloud);
  for (double r : {R / 10.0, R / 5.0}) {
    const NormalField f = estimate_all_normals(s.cloud, t, {r, Vec3(0, 0, 0.03), 5, 1});
    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      REQUIRE(f.valid[i]);
      const Vec3& p = s.cloud.points[i];
      const Vec3 radial(p.x(), p.y(), 0.0);
      // interior viewpoint on the axis: oriented normals point inward
      worst = std::max(worst, angle_deg(f.normals[i], -radial));
    }
    CHECK(worst <= 2.0);
  }
}

TEST_CASE("isolated and degenerate neighborhoods are invalid") {
  PointCloud c;
  for (int i = 0; i < 10; ++i) c.points.emplace_back(i * 0.001, 0.0, 0.0);  // a line
  c.points.emplace_back(5.0, 5.0, 5.0);                                       // isolated
  const KdTree t(c);
  const NormalField f = estimate_all_normals(c, t, {0.01, Vec3::Zero(), 5, 1});
  CHECK(f.valid_count() == 0);
}

TEST_CASE("thread count does not change the result") {
  const SyntheticCloud s = gen_cylinder(0.03, 0.05, 0.002, 0.0005, 3);
  const KdTree t(s.cloud);
  const NormalField a = estimate_all_normals(s.cloud, t, {0.008, s.viewpoint, 5, 1});
  const NormalField b = estimate_all_normals(s.cloud, t, {0.008, s.viewpoint, 5, 4});
  CHECK(a.normals == b.normals);
  CHECK(a.valid == b.valid);
}

TEST_CASE("normal estimation argument checks") {
  const SyntheticCloud s = gen_plane(5, 5, 0.001, 0.0, 1);
  const KdTree t(s.cloud);
  CHECK_ERRC(estimate_all_normals(s.cloud, t, {0.0, Vec3::Zero(), 5, 1}), Errc::non_positive_radius);
  CHECK_ERRC(estimate_all_normals(s.cloud, t, {0.01, Vec3::Zero(), 2, 1}), Errc::invalid_argument);
  CHECK_ERRC(estimate_all_normals(PointCloud{}, t, {0.01, Vec3::Zero(), 5, 1}), Errc::empty_cloud);
}

TEST_CASE("attach and wrap normals") {
  SyntheticCloud s = gen_plane(6, 6, 0.001, 0.0, 1);
  const KdTree t(s.cloud);
  const NormalField f = estimate_all_normals(s.cloud, t, {0.003, Vec3(0, 0, 1), 5, 1});
  attach_normals(s.cloud, f);
  REQUIRE(s.cloud.has_normals());
  const NormalField g = NormalField::from_cloud(s.cloud);
  CHECK(g.normals == f.normals);
  CHECK(g.valid == f.valid);
}
