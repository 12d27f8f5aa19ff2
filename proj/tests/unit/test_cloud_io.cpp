#include "test_util.hpp"

#include <shapebp/cloud_io.hpp>

#include <cmath>
#include <random>

using namespace shapebp;
using testutil::TempDir;
using testutil::write_file;

TEST_CASE("xyz with three lines loads three points without normals") {
  TempDir dir;
  write_file(dir / "a.xyz", "0 0 0\n1 0 0\n0 1 0\n");
  const PointCloud c = load_cloud(dir / "a.xyz");
  REQUIRE(c.size() == 3);
  CHECK_FALSE(c.has_normals());
  CHECK(c.points[1] == Vec3(1, 0, 0));
  CHECK(c.points[2] == Vec3(0, 1, 0));
}

TEST_CASE("pcd ascii with normal fields") {
  TempDir dir;
  write_file(dir / "a.pcd",
             "# .PCD v0.7\nVERSION 0.7\nFIELDS x y z normal_x normal_y normal_z\nSIZE 4 4 4 4 4 4\n"
             "TYPE F F F F F F\nCOUNT 1 1 1 1 1 1\nWIDTH 2\nHEIGHT 1\nVIEWPOINT 0 0 0 1 0 0 0\nPOINTS 2\n"
             "DATA ascii\n0 0 0 0 0 1\n1 2 3 1 0 0\n");
  const PointCloud c = load_cloud(dir / "a.pcd");
  REQUIRE(c.size() == 2);
  REQUIRE(c.has_normals());
  CHECK(c.normals[0] == Vec3(0, 0, 1));
  CHECK(c.normals[1] == Vec3(1, 0, 0));
  CHECK(c.valid[0] == 1);
  CHECK(c.points[1] == Vec3(1, 2, 3));
}

TEST_CASE("pcd with fewer records than declared is a parse error") {
  TempDir dir;
  write_file(dir / "a.pcd",
             "VERSION 0.7\nFIELDS x y z\nSIZE 4 4 4\nTYPE F F F\nCOUNT 1 1 1\nWIDTH 5\nHEIGHT 1\nPOINTS 5\n"
             "DATA ascii\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n");
  CHECK_ERRC(load_cloud(dir / "a.pcd"), Errc::parse_error);
}

TEST_CASE("pcd extra unknown fields are ignored") {
  TempDir dir;
  write_file(dir / "a.pcd",
             "VERSION 0.7\nFIELDS x y z intensity\nSIZE 4 4 4 4\nTYPE F F F F\nCOUNT 1 1 1 1\nWIDTH 1\n"
             "HEIGHT 1\nPOINTS 1\nDATA ascii\n1 2 3 77\n");
  const PointCloud c = load_cloud(dir / "a.pcd");
  REQUIRE(c.size() == 1);
  CHECK(c.points[0] == Vec3(1, 2, 3));
}

TEST_CASE("binary pcd is rejected") {
  TempDir dir;
  write_file(dir / "a.pcd", "VERSION 0.7\nFIELDS x y z\nSIZE 4 4 4\nTYPE F F F\nCOUNT 1 1 1\nWIDTH 1\nHEIGHT 1\n"
                            "POINTS 1\nDATA binary\n");
  CHECK_ERRC(load_cloud(dir / "a.pcd"), Errc::unsupported_format);
}

TEST_CASE("non-finite coordinates fail unless dropping is requested") {
  TempDir dir;
  write_file(dir / "a.xyz", "0 0 0\nnan 1 1\n1 1 inf\n2 2 2\n");
  CHECK_ERRC(load_cloud(dir / "a.xyz"), Errc::non_finite_coordinate);
  LoadOptions opts;
  opts.drop_non_finite = true;
  const PointCloud c = load_cloud(dir / "a.xyz", CloudFormat::xyz, opts);
  REQUIRE(c.size() == 2);
  CHECK(c.points[1] == Vec3(2, 2, 2));
}

TEST_CASE("malformed numbers are parse errors") {
  TempDir dir;
  write_file(dir / "a.xyz", "0 0 0\n1 zero 0\n");
  CHECK_ERRC(load_cloud(dir / "a.xyz"), Errc::parse_error);
  write_file(dir / "b.xyz", "0 0\n");
  CHECK_ERRC(load_cloud(dir / "b.xyz"), Errc::parse_error);
}

TEST_CASE("missing file is an io error") { CHECK_ERRC(load_cloud("/nonexistent/x.xyz"), Errc::io_error); }

TEST_CASE("unknown extension is unsupported") {
  TempDir dir;
  write_file(dir / "a.obj", "v 0 0 0\n");
  CHECK_ERRC(load_cloud(dir / "a.obj"), Errc::unsupported_format);
}

TEST_CASE("ply ascii with an extra face element") {
  TempDir dir;
  write_file(dir / "a.ply",
             "ply\nformat ascii 1.0\ncomment test\nelement vertex 3\nproperty float x\nproperty float y\n"
             "property float z\nproperty uchar red\nelement face 1\nproperty list uchar int vertex_indices\n"
             "end_header\n0 0 0 255\n1 0 0 0\n0 1 0 10\n3 0 1 2\n");
  const PointCloud c = load_cloud(dir / "a.ply");
  REQUIRE(c.size() == 3);
  CHECK(c.points[2] == Vec3(0, 1, 0));
}

TEST_CASE("binary ply is rejected") {
  TempDir dir;
  write_file(dir / "a.ply", "ply\nformat binary_little_endian 1.0\nelement vertex 0\nend_header\n");
  CHECK_ERRC(load_cloud(dir / "a.ply"), Errc::unsupported_format);
}

TEST_CASE("save then load round trips within 1e-6 in every format") {
  TempDir dir;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  PointCloud cloud;
  for (int i = 0; i < 1000; ++i) cloud.points.emplace_back(u(rng), u(rng), u(rng));
  for (const auto& [name, fmt] : {std::pair{"a.pcd", CloudFormat::pcd_ascii}, std::pair{"a.ply", CloudFormat::ply_ascii},
                                  std::pair{"a.xyz", CloudFormat::xyz}}) {
    save_cloud(cloud, dir / name, fmt);
    const PointCloud back = load_cloud(dir / name);
    REQUIRE(back.size() == cloud.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      worst = std::max(worst, (back.points[i] - cloud.points[i]).cwiseAbs().maxCoeff());
    }
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("normals survive a round trip and invalid normals stay invalid") {
  TempDir dir;
  PointCloud cloud;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int i = 0; i < 200; ++i) {
    cloud.points.emplace_back(g(rng), g(rng), g(rng));
    cloud.normals.push_back(Vec3(g(rng), g(rng), g(rng)).normalized());
    cloud.valid.push_back(i % 7 == 0 ? 0 : 1);
  }
  for (const char* name : {"n.pcd", "n.ply"}) {
    save_cloud(cloud, dir / name, *format_from_extension(name));
    const PointCloud back = load_cloud(dir / name);
    REQUIRE(back.has_normals());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      CHECK(back.valid[i] == cloud.valid[i]);
      if (cloud.valid[i]) CHECK((back.normals[i] - cloud.normals[i]).norm() <= 1e-5);
    }
  }
}

TEST_CASE("saving normals to xyz is unsupported") {
  TempDir dir;
  PointCloud cloud;
  cloud.points = {Vec3(0, 0, 0)};
  cloud.normals = {Vec3(0, 0, 1)};
  cloud.valid = {1};
  CHECK_ERRC(save_cloud(cloud, dir / "a.xyz", CloudFormat::xyz), Errc::unsupported_fields);
}

TEST_CASE("saving an empty cloud fails") {
  TempDir dir;
  CHECK_ERRC(save_cloud(PointCloud{}, dir / "a.pcd", CloudFormat::pcd_ascii), Errc::empty_cloud);
}

TEST_CASE("label files") {
  TempDir dir;
  write_file(dir / "l.txt", "0\n0\n1\n");
  const LabelMask m = load_labels(dir / "l.txt");
  CHECK(m == LabelMask{Label::planar, Label::planar, Label::curved});

  write_file(dir / "bad.txt", "0\n7\n");
  CHECK_ERRC(load_labels(dir / "bad.txt"), Errc::unknown_class_id);

  write_file(dir / "empty.txt", "");
  const LabelMask empty = load_labels(dir / "empty.txt");
  CHECK(empty.empty());
  PointCloud cloud;
  cloud.points = {Vec3::Zero()};
  CHECK_ERRC(check_pairing(cloud, empty), Errc::length_mismatch);

  const LabelMask all{Label::planar, Label::curved, Label::edge, Label::unlabeled};
  save_labels(all, dir / "rt.txt");
  CHECK(load_labels(dir / "rt.txt") == all);
}

TEST_CASE("format names") {
  CHECK(parse_cloud_format("pcd") == CloudFormat::pcd_ascii);
  CHECK(parse_cloud_format("ply-ascii") == CloudFormat::ply_ascii);
  CHECK(parse_cloud_format("xyz") == CloudFormat::xyz);
  CHECK_FALSE(parse_cloud_format("las").has_value());
  CHECK(format_from_extension("a/b.PCD") == CloudFormat::pcd_ascii);
}

TEST_CASE("likelihood ramp runs green to blue") {
  CHECK(likelihood_color(1.0) == Rgb{0, 255, 0});
  CHECK(likelihood_color(0.0) == Rgb{0, 0, 255});
}
