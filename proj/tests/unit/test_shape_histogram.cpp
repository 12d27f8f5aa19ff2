#include "test_util.hpp"

#include <shapebp/pipeline.hpp>
#include <shapebp/shape_histogram.hpp>
#include <shapebp/synth.hpp>

#include <json.hpp>

#include <cmath>

using namespace shapebp;

namespace {

InadField field_from(const std::vector<std::pair<double, double>>& pairs, double radius = 0.01) {
  InadField f;
  for (auto [mu, sigma] : pairs) {
    f.pairs.push_back({mu, sigma, 5});
    f.valid.push_back(1);
  }
  f.radius = radius;
  f.outlier_rate = 1.0;
  return f;
}

}  // namespace

TEST_CASE("bin ids") {
  CHECK(bin_id(0.0, 90.0, 10) == 0);
  CHECK(bin_id(0.0, 90.0, 1) == 0);
  CHECK(bin_id(45.0, 90.0, 10) == 5);
  CHECK(bin_id(90.0, 90.0, 10) == 9);
  CHECK(bin_id(200.0, 90.0, 10) == 9);
  CHECK(bin_id(8.9999, 90.0, 10) == 0);
  CHECK(bin_id(9.0, 90.0, 10) == 1);
  CHECK_ERRC(bin_id(-1.0, 90.0, 10), Errc::negative_value);
  CHECK_ERRC(bin_id(std::nan(""), 90.0, 10), Errc::negative_value);
}

TEST_CASE("parameter validation") {
  CHECK_ERRC((HistogramParams{0, 10, 90, 45}.validate()), Errc::invalid_argument);
  CHECK_ERRC((HistogramParams{10, 10, 0, 45}.validate()), Errc::invalid_argument);
}

TEST_CASE("plane field fills only bin (0,0)") {
  const ShapeHistogram h = build_histogram(field_from({{0, 0}, {0, 0}, {0.5, 0.1}}), {});
  CHECK(h.at(0, 0) == 1.0);
  double rest = 0;
  for (double b : h.bins) rest += b;
  CHECK(rest == 1.0);
  CHECK(h.sample_count == 3);
}

TEST_CASE("counts 30 and 10 normalize to 1 and 1/3") {
  std::vector<std::pair<double, double>> pairs(30, {1.0, 1.0});
  pairs.insert(pairs.end(), 10, {50.0, 20.0});
  const InadField f = field_from(pairs);
  const BinCounts counts = count_bins(f, {});
  CHECK(counts.at(0, 0) == 30);
  CHECK(counts.at(5, 4) == 10);
  CHECK(counts.total() == 40);
  const ShapeHistogram h = build_histogram(f, {});
  CHECK(h.at(0, 0) == 1.0);
  CHECK(h.at(5, 4) == doctest::Approx(1.0 / 3.0));
  CHECK(h.at(5, 4) == doctest::Approx(0.3333).epsilon(1e-4));
}

TEST_CASE("invalid points are not counted; empty fields fail") {
  InadField f = field_from({{1, 1}, {80, 40}});
  f.valid[1] = 0;
  CHECK(count_bins(f, {}).total() == 1);
  f.valid[0] = 0;
  CHECK_ERRC(build_histogram(f, {}), Errc::no_valid_points);
  CHECK_ERRC(build_histogram(InadField{}, {}), Errc::no_valid_points);
}

TEST_CASE("peak bin is exactly one for arbitrary counts") {
  BinCounts c;
  c.params = {7, 3, 90, 45};
  c.counts.assign(21, 0);
  c.counts[4] = 3;
  c.counts[10] = 7;
  c.counts[20] = 1;
  const ShapeHistogram h = normalize(c, 0.02);
  CHECK(h.bins[10] == 1.0);
  CHECK(h.bins[4] == 3.0 / 7.0);
  CHECK(h.source_r == 0.02);
  CHECK_NOTHROW(h.validate());
}

TEST_CASE("back projection") {
  const ShapeHistogram plane = build_histogram(field_from({{0, 0}, {0, 0}}), {});
  const LikelihoodField on_plane = back_project(plane, field_from({{0, 0}, {0.2, 0.1}, {3, 2}}));
  CHECK(on_plane.scores == std::vector<double>{1.0, 1.0, 1.0});
  CHECK_FALSE(on_plane.radius_mismatch);

  const LikelihoodField curved = back_project(plane, field_from({{30, 10}, {60, 20}}));
  CHECK(curved.scores == std::vector<double>{0.0, 0.0});

  InadField partly = field_from({{0, 0}, {0, 0}});
  partly.valid[1] = 0;
  const LikelihoodField s = back_project(plane, partly);
  CHECK(s.valid == std::vector<std::uint8_t>{1, 0});
  CHECK(s.scores[1] == 0.0);

  const LikelihoodField mism = back_project(plane, field_from({{0, 0}}, 0.05));
  CHECK(mism.radius_mismatch);
  CHECK(mism.scores[0] == 1.0);
}

TEST_CASE("cylinder histogram on its own cylinder matches a direct lookup") {
  const SyntheticCloud s = gen_cylinder(0.04, 0.06, 0.002, 0.0, 2);
  const SurfaceAnalysis a = analyze_surface(s.cloud, {0.01, 0.0, 1.0, 5, s.viewpoint, 1});
  const HistogramParams hp{10, 10, 90, 45};
  const ShapeHistogram h = build_histogram(a.inad, hp);
  const LikelihoodField lf = back_project(h, a.inad);

  // Oracle: recount the grid by hand and look each point up in it.
  std::vector<double> grid(100, 0.0);
  for (std::size_t i = 0; i < a.inad.size(); ++i) {
    if (!a.inad.valid[i]) continue;
    const auto im = std::min<std::size_t>(9, static_cast<std::size_t>(a.inad.pairs[i].mu / 9.0));
    const auto is = std::min<std::size_t>(9, static_cast<std::size_t>(a.inad.pairs[i].sigma / 4.5));
    grid[im * 10 + is] += 1.0;
  }
  const double peak = *std::max_element(grid.begin(), grid.end());
  double sum = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.inad.size(); ++i) {
    if (!a.inad.valid[i]) continue;
    const auto im = std::min<std::size_t>(9, static_cast<std::size_t>(a.inad.pairs[i].mu / 9.0));
    const auto is = std::min<std::size_t>(9, static_cast<std::size_t>(a.inad.pairs[i].sigma / 4.5));
    CHECK(lf.scores[i] == doctest::Approx(grid[im * 10 + is] / peak).epsilon(1e-12));
    sum += lf.scores[i];
    ++n;
  }
  CHECK(sum / static_cast<double>(n) >= 0.5);
}

TEST_CASE("serialization round trip is bitwise") {
  BinCounts c;
  c.params = {6, 4, 90, 45};
  c.counts = {3, 0, 1, 7, 2, 9, 9, 1, 0, 0, 0, 0, 5, 3, 1, 1, 0, 0, 2, 2, 0, 0, 0, 1};
  const ShapeHistogram h = normalize(c, 0.0123);
  const ShapeHistogram back = deserialize(serialize(h));
  CHECK(back.bins == h.bins);
  CHECK(back.params.bins_mu == 6);
  CHECK(back.params.bins_sigma == 4);
  CHECK(back.source_r == h.source_r);
  CHECK(back.sample_count == h.sample_count);
  CHECK(serialize(back) == serialize(h));
}

TEST_CASE("deserialization errors") {
  BinCounts c;
  c.params = {2, 2, 90, 45};
  c.counts = {4, 1, 0, 2};
  const std::string good = serialize(normalize(c, 0.01));

  CHECK_ERRC(deserialize("{not json"), Errc::parse_error);

  auto doc = nlohmann::json::parse(good);
  doc.erase("k_sigma");
  CHECK_ERRC(deserialize(doc.dump()), Errc::schema_mismatch);

  doc = nlohmann::json::parse(good);
  doc["version"] = 99;
  CHECK_ERRC(deserialize(doc.dump()), Errc::schema_mismatch);

  doc = nlohmann::json::parse(good);
  doc["bins"].push_back(0.0);
  CHECK_ERRC(deserialize(doc.dump()), Errc::schema_mismatch);

  doc = nlohmann::json::parse(good);
  doc["k_mu"] = "two";
  CHECK_ERRC(deserialize(doc.dump()), Errc::schema_mismatch);

  doc = nlohmann::json::parse(good);
  doc["bins"][1] = 1.2;
  CHECK_ERRC(deserialize(doc.dump()), Errc::invariant_violation);

  doc = nlohmann::json::parse(good);
  doc["bins"][0] = 0.9;
  CHECK_ERRC(deserialize(doc.dump()), Errc::invariant_violation);
}

TEST_CASE("file round trip") {
  testutil::TempDir dir;
  const ShapeHistogram h = build_histogram(field_from({{0, 0}, {12, 3}}), {});
  save_histogram(h, dir / "h.json");
  CHECK(load_histogram(dir / "h.json").bins == h.bins);
  CHECK_ERRC(load_histogram(dir / "missing.json"), Errc::io_error);
}
