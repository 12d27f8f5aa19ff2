#include "test_util.hpp"

#include <json.hpp>

#include <cstdlib>
#include <sys/wait.h>

using testutil::read_file;
using testutil::TempDir;
using testutil::write_file;

namespace {

struct Run {
  int code = -1;
  std::string err;
  std::string out;
};

Run run(const TempDir& dir, const std::string& args) {
  const auto out = dir / "stdout.txt";
  const auto err = dir / "stderr.txt";
  const std::string cmd =
      std::string("cd '") + dir.path().string() + "' && '" + SHAPEBP_CLI_PATH + "' " + args + " >'" + out.string() +
      "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(out);
  r.err = read_file(err);
  return r;
}

const char* kPlane = R"({"seed": 1, "primitives": [{"type": "plane", "extent": [0.12, 0.12], "resolution": 0.004}]})";
const char* kBox = R"({"seed": 2, "primitives": [{"type": "box", "edge_length": 0.03, "resolution": 0.001}]})";
const char* kTable = R"({"seed": 3, "primitives": [{"type": "plane", "extent": [0.3, 0.3], "resolution": 0.004},
  {"type": "cylinder", "radius": 0.04, "height": 0.08, "resolution": 0.004}]})";

void make_scenes(const TempDir& dir) {
  write_file(dir / "plane.json", kPlane);
  write_file(dir / "box.json", kBox);
  write_file(dir / "table.json", kTable);
  REQUIRE(run(dir, "synth --spec plane.json --out plane.pcd").code == 0);
  REQUIRE(run(dir, "synth --spec box.json --out box.ply").code == 0);
  REQUIRE(run(dir, "synth --spec table.json --out table.pcd").code == 0);
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  TempDir dir;
  CHECK(run(dir, "--help").code == 0);
  CHECK(run(dir, "").code == 2);
  CHECK(run(dir, "histogram --cloud x.pcd").code == 2);
  CHECK(run(dir, "histogram --cloud x.pcd --out h.json --radius -1").code == 2);
  CHECK(run(dir, "frobnicate").code == 2);
}

TEST_CASE("synth writes cloud, labels and config; reruns are byte-identical") {
  TempDir dir;
  make_scenes(dir);
  CHECK(std::filesystem::exists(dir / "plane.pcd.labels"));
  const auto cfg = nlohmann::json::parse(read_file(dir / "plane.pcd.config.json"));
  CHECK(cfg["command"] == "synth");
  CHECK(cfg["points"] == 31 * 31);
  const std::string first = read_file(dir / "box.ply");
  const std::string labels = read_file(dir / "box.ply.labels");
  REQUIRE(run(dir, "synth --spec box.json --out box.ply").code == 0);
  CHECK(read_file(dir / "box.ply") == first);
  CHECK(read_file(dir / "box.ply.labels") == labels);
  CHECK(labels.find("2\n") != std::string::npos);

  REQUIRE(run(dir, "--seed 99 synth --spec box.json --out box99.ply").code == 0);
  CHECK(nlohmann::json::parse(read_file(dir / "box99.ply.config.json"))["spec"]["seed"] == 99);
}

TEST_CASE("malformed spec exits with 2 and a message") {
  TempDir dir;
  write_file(dir / "bad.json", R"({"primitives": [{"type": "plane"}]})");
  const Run r = run(dir, "synth --spec bad.json --out x.pcd");
  CHECK(r.code == 2);
  CHECK(r.err.find("bad-spec") != std::string::npos);
  write_file(dir / "broken.json", "{");
  CHECK(run(dir, "synth --spec broken.json --out x.pcd").code == 2);
}

TEST_CASE("histogram of a plane peaks at bin (0,0)") {
  TempDir dir;
  make_scenes(dir);
  REQUIRE(run(dir, "histogram --cloud plane.pcd --radius 0.012 --out h.json").code == 0);
  const auto h = nlohmann::json::parse(read_file(dir / "h.json"));
  CHECK(h["bins"][0] == 1.0);
  CHECK(h["source_r"] == 0.012);
  const auto cfg = nlohmann::json::parse(read_file(dir / "h.json.config.json"));
  CHECK(cfg["analysis"]["radius"] == 0.012);
  CHECK(cfg["analysis"]["outlier_rate"] == 1.0);
}

TEST_CASE("cylinder histograms at two radii peak in different bins") {
  TempDir dir;
  write_file(dir / "cyl.json",
             R"({"primitives": [{"type": "cylinder", "radius": 0.02, "height": 0.06, "resolution": 0.001}]})");
  REQUIRE(run(dir, "synth --spec cyl.json --out cyl.pcd").code == 0);
  REQUIRE(run(dir, "histogram --cloud cyl.pcd --radius 0.003 --out a.json --bins-mu 20").code == 0);
  REQUIRE(run(dir, "histogram --cloud cyl.pcd --radius 0.012 --out b.json --bins-mu 20").code == 0);
  auto argmax = [](const nlohmann::json& h) {
    const auto bins = h["bins"].get<std::vector<double>>();
    return std::max_element(bins.begin(), bins.end()) - bins.begin();
  };
  CHECK(argmax(nlohmann::json::parse(read_file(dir / "a.json"))) !=
        argmax(nlohmann::json::parse(read_file(dir / "b.json"))));
}

TEST_CASE("empty cloud exits with 2") {
  TempDir dir;
  write_file(dir / "empty.xyz", "");
  CHECK(run(dir, "histogram --cloud empty.xyz --radius 0.01 --out h.json").code == 2);
}

TEST_CASE("missing input exits with 1") {
  TempDir dir;
  CHECK(run(dir, "histogram --cloud nothere.pcd --radius 0.01 --out h.json").code == 1);
}

TEST_CASE("back projection of a plane onto itself scores 1; radius mismatch warns") {
  TempDir dir;
  make_scenes(dir);
  REQUIRE(run(dir, "histogram --cloud plane.pcd --radius 0.012 --out h.json").code == 0);
  Run r = run(dir, "backproject --histogram h.json --cloud plane.pcd --out s.csv --ply s.ply");
  REQUIRE(r.code == 0);
  CHECK(r.err.find("warning") == std::string::npos);
  const std::string csv = read_file(dir / "s.csv");
  CHECK(csv.rfind("point_id,score,valid\n", 0) == 0);
  CHECK(csv.find(",0.000000,") == std::string::npos);
  CHECK(std::filesystem::exists(dir / "s.ply"));

  r = run(dir, "backproject --histogram h.json --cloud plane.pcd --out s2.csv --radius 0.02");
  CHECK(r.code == 0);
  CHECK(r.err.find("warning") != std::string::npos);
  CHECK(nlohmann::json::parse(read_file(dir / "s2.csv.config.json"))["radius_mismatch"] == true);
}

TEST_CASE("classify and edges produce labels and reports") {
  TempDir dir;
  make_scenes(dir);
  Run r = run(dir,
              "classify --cloud table.pcd --sample plane.pcd --radius 0.03 --out t.labels --gt table.pcd.labels "
              "--report t.json");
  REQUIRE(r.code == 0);
  const auto rep = nlohmann::json::parse(read_file(dir / "t.json"));
  CHECK(rep["classes"]["planar"]["recall"].get<double>() >= 0.8);
  CHECK(rep["parameters"]["r"] == 0.03);
  CHECK_FALSE(rep.contains("timings_s"));

  r = run(dir, "classify --cloud table.pcd --radius 0.03 --out t.labels");
  CHECK(r.code == 2);

  r = run(dir, "edges --cloud box.ply --sample plane.pcd --radius 0.006 --out e.labels --gt box.ply.labels "
               "--report -");
  REQUIRE(r.code == 0);
  const auto edges = nlohmann::json::parse(r.out);
  CHECK(edges["classes"].contains("edge"));
  CHECK(edges["classes"]["edge"]["f1"].get<double>() > 0.0);

  r = run(dir, "eval --pred t.labels --gt table.pcd.labels --report ev.json");
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(read_file(dir / "ev.json"))["miou"] == rep["miou"]);
  CHECK(run(dir, "eval --pred t.labels --gt box.ply.labels").code == 2);
  CHECK(run(dir, "eval --pred t.labels --gt table.pcd.labels --classes planar,round").code == 2);
}

TEST_CASE("outputs do not depend on the thread count") {
  TempDir dir;
  make_scenes(dir);
  REQUIRE(run(dir, "--threads 1 classify --cloud table.pcd --sample plane.pcd --out a.labels --likelihood-csv a.csv")
              .code == 0);
  REQUIRE(run(dir, "--threads 3 classify --cloud table.pcd --sample plane.pcd --out b.labels --likelihood-csv b.csv")
              .code == 0);
  CHECK(read_file(dir / "a.labels") == read_file(dir / "b.labels"));
  CHECK(read_file(dir / "a.csv") == read_file(dir / "b.csv"));
}

TEST_CASE("bench emits a timing table") {
  TempDir dir;
  const Run r = run(dir, "bench --k 10,100 --repetitions 2 --max-points 200 --out -");
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["rows"].size() == 2);
  CHECK(doc["rows"][1]["k"] == 100);
  make_scenes(dir);
  CHECK(run(dir, "bench --cloud box.ply --k 100000").code == 1);
}

TEST_CASE("ransac baseline") {
  TempDir dir;
  make_scenes(dir);
  Run r = run(dir, "ransac --cloud table.pcd --model cylinder --out r.labels --gt table.pcd.labels --report r.json "
                   "--models m.json --normal-radius 0.012 --max-radius 0.1");
  REQUIRE(r.code == 0);
  const auto models = nlohmann::json::parse(read_file(dir / "m.json"));
  REQUIRE(models.size() == 1);
  CHECK(models[0]["radius"].get<double>() == doctest::Approx(0.04).epsilon(0.05));
  CHECK(run(dir, "ransac --cloud plane.pcd --model cylinder --out r2.labels").code == 1);
  CHECK(run(dir, "ransac --cloud plane.pcd --model cone --out r2.labels").code == 2);
}
