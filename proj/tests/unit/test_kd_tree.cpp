#include "test_util.hpp"

#include <shapebp/kd_tree.hpp>

#include <algorithm>
#include <random>

using namespace shapebp;

namespace {

PointCloud random_cloud(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PointCloud c;
  for (std::size_t i = 0; i < n; ++i) c.points.emplace_back(u(rng), u(rng), u(rng));
  return c;
}

std::vector<PointId> sorted(std::vector<PointId> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// Independent of squared_distance: plain Eigen norms, full sort.
std::vector<PointId> knn_oracle(const PointCloud& c, PointId q, std::size_t k) {
  std::vector<std::pair<double, PointId>> all;
  for (PointId i = 0; i < c.size(); ++i) {
    if (i != q) all.emplace_back((c.points[i] - c.points[q]).squaredNorm(), i);
  }
  std::sort(all.begin(), all.end());
  std::vector<PointId> out;
  for (std::size_t i = 0; i < std::min(k, all.size()); ++i) out.push_back(all[i].second);
  return out;
}

}  // namespace

TEST_CASE("empty cloud cannot be indexed") { CHECK_ERRC(KdTree(PointCloud{}), Errc::empty_cloud); }

TEST_CASE("single point has no neighbors") {
  PointCloud c;
  c.points = {Vec3(1, 2, 3)};
  const KdTree t(c);
  CHECK(t.radius_neighbors(0, 10.0).empty());
  CHECK(t.k_nearest(0, 3).empty());
}

TEST_CASE("1 mm grid with r = 1.5 mm gives 8 neighbors inside") {
  PointCloud c;
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) c.points.emplace_back(i * 0.001, j * 0.001, 0.0);
  const KdTree t(c);
  for (int i = 1; i < 19; ++i) {
    for (int j = 1; j < 19; ++j) {
      const auto nb = t.radius_neighbors(static_cast<PointId>(i * 20 + j), 0.0015);
      CHECK(nb.size() == 8);
    }
  }
  CHECK(t.radius_neighbors(0, 0.0015).size() == 3);
  CHECK(t.radius_neighbors(5, 0.0009).empty());
}

TEST_CASE("radius queries equal brute force") {
  const PointCloud c = random_cloud(10000, 11);
  const KdTree t(c);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<PointId> pick(0, 9999);
  std::uniform_real_distribution<double> radius(0.005, 0.15);
  for (int q = 0; q < 300; ++q) {
    const PointId id = pick(rng);
    const double r = radius(rng);
    CHECK(sorted(t.radius_neighbors(id, r)) == sorted(brute_force_radius(c, id, r)));
  }
}

TEST_CASE("closed ball includes points exactly at r") {
  PointCloud c;
  c.points = {Vec3(0, 0, 0), Vec3(0.5, 0, 0), Vec3(0, 0.25, 0), Vec3(0, 0, 0.75)};
  const KdTree t(c);
  CHECK(sorted(t.radius_neighbors(0, 0.5)) == std::vector<PointId>{1, 2});
}

TEST_CASE("radius search at arbitrary location") {
  const PointCloud c = random_cloud(2000, 2);
  const KdTree t(c);
  const Vec3 q(0.5, 0.5, 0.5);
  std::vector<PointId> got;
  t.radius_search(q, 0.2, got);
  std::vector<PointId> want;
  for (PointId i = 0; i < c.size(); ++i) {
    if ((c.points[i] - q).norm() <= 0.2) want.push_back(i);
  }
  CHECK(sorted(got) == want);
}

TEST_CASE("invalid queries") {
  const PointCloud c = random_cloud(10, 1);
  const KdTree t(c);
  CHECK_ERRC(t.radius_neighbors(10, 0.1), Errc::invalid_id);
  CHECK_ERRC(t.radius_neighbors(0, 0.0), Errc::non_positive_radius);
  CHECK_ERRC(t.radius_neighbors(0, -1.0), Errc::non_positive_radius);
  CHECK_ERRC(t.k_nearest(0, 0), Errc::invalid_argument);
}

TEST_CASE("k nearest on a line") {
  PointCloud c;
  c.points = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0), Vec3(3, 0, 0)};
  const KdTree t(c);
  CHECK(t.k_nearest(0, 2) == std::vector<PointId>{1, 2});
  CHECK(t.k_nearest(0, 4) == std::vector<PointId>{1, 2, 3});
  CHECK(t.k_nearest(1, 2) == std::vector<PointId>{0, 2});
}

TEST_CASE("k nearest equals full-sort oracle") {
  const PointCloud c = random_cloud(3000, 9);
  const KdTree t(c, 8);
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<PointId> pick(0, 2999);
  for (std::size_t k : {1u, 5u, 17u, 100u, 500u}) {
    for (int q = 0; q < 20; ++q) {
      const PointId id = pick(rng);
      CHECK(t.k_nearest(id, k) == knn_oracle(c, id, k));
    }
  }
}

TEST_CASE("duplicate points are all found") {
  PointCloud c;
  for (int i = 0; i < 50; ++i) c.points.emplace_back(0.1, 0.2, 0.3);
  c.points.emplace_back(1, 1, 1);
  const KdTree t(c, 4);
  CHECK(t.radius_neighbors(0, 1e-9).size() == 49);
  CHECK(t.k_nearest(50, 1).size() == 1);
}
