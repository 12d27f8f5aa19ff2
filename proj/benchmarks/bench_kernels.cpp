#include <shapebp/eigen3x3.hpp>
#include <shapebp/inad.hpp>
#include <shapebp/kd_tree.hpp>
#include <shapebp/normals.hpp>
#include <shapebp/synth.hpp>

#include <benchmark/benchmark.h>

#include <random>

using namespace shapebp;

namespace {

const SyntheticCloud& cylinder() {
  static const SyntheticCloud c = gen_cylinder(0.05, 0.2, 0.001, 0.0, 1);
  return c;
}

const NormalField& cylinder_normals() {
  static const NormalField n = [] {
    const KdTree t(cylinder().cloud);
    return estimate_all_normals(cylinder().cloud, t, {0.01, cylinder().viewpoint, 5, 1});
  }();
  return n;
}

void BM_InadPerPoint(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const KdTree tree(cylinder().cloud);
  const PointId center = static_cast<PointId>(cylinder().cloud.size() / 2);
  const auto nb = tree.k_nearest(center, k);
  const NormalField& normals = cylinder_normals();
  std::vector<double> scratch;
  InadPair pair;
  for (auto _ : state) {
    inad_at(normals, center, nb, 1.0, scratch, pair);
    benchmark::DoNotOptimize(pair);
  }
  state.counters["k"] = static_cast<double>(k);
}
BENCHMARK(BM_InadPerPoint)->Arg(10)->Arg(100)->Arg(200)->Arg(300)->Arg(400)->Arg(500);

void BM_KdTreeBuild(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u;
  std::vector<Vec3> pts(static_cast<std::size_t>(state.range(0)));
  for (auto& p : pts) p = Vec3(u(rng), u(rng), u(rng));
  for (auto _ : state) {
    KdTree t(pts);
    benchmark::DoNotOptimize(t);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KdTreeBuild)->Arg(10000)->Arg(100000);

void BM_RadiusQuery(benchmark::State& state) {
  const KdTree tree(cylinder().cloud);
  const double r = static_cast<double>(state.range(0)) * 1e-3;
  std::vector<PointId> out;
  PointId id = 0;
  const auto n = static_cast<PointId>(cylinder().cloud.size());
  for (auto _ : state) {
    tree.radius_neighbors(id, r, out);
    benchmark::DoNotOptimize(out.data());
    id = (id + 7919) % n;
  }
}
BENCHMARK(BM_RadiusQuery)->Arg(3)->Arg(6)->Arg(10);

void BM_NormalEstimation(benchmark::State& state) {
  const SyntheticCloud s = gen_cylinder(0.05, 0.05, 0.001, 0.0, 2);
  const KdTree tree(s.cloud);
  for (auto _ : state) {
    const NormalField f = estimate_all_normals(s.cloud, tree, {0.006, s.viewpoint, 5, 1});
    benchmark::DoNotOptimize(f.normals.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.cloud.size()));
}
BENCHMARK(BM_NormalEstimation)->Unit(benchmark::kMillisecond);

std::vector<SymMat3> random_matrices() {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::vector<SymMat3> ms(1024);
  for (auto& m : ms) {
    Eigen::Matrix3d a;
    for (int i = 0; i < 9; ++i) a(i / 3, i % 3) = g(rng);
    m = SymMat3::from_matrix(a * a.transpose());
  }
  return ms;
}

void BM_SmallestEigen(benchmark::State& state) {
  const auto ms = random_matrices();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(smallest_eigen(ms[i++ & 1023]));
  }
}
BENCHMARK(BM_SmallestEigen);

void BM_Jacobi(benchmark::State& state) {
  const auto ms = random_matrices();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(jacobi_eigen(ms[i++ & 1023]));
  }
}
BENCHMARK(BM_Jacobi);

}  // namespace

BENCHMARK_MAIN();
