#include "shapebp/bench.hpp"

#include "shapebp/error.hpp"
#include "shapebp/inad.hpp"
#include "shapebp/kd_tree.hpp"
#include "shapebp/parallel.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>

namespace shapebp {

namespace {

using Clock = std::chrono::steady_clock;

// Accumulated so the optimizer cannot drop the timed work.
volatile double g_sink = 0.0;

double timed_pass(const NormalField& normals, const std::vector<PointId>& centers,
                  const std::vector<PointId>& knn, std::size_t stride, std::size_t k, double outlier_rate,
                  unsigned threads) {
  std::vector<double> sink(centers.size(), 0.0);
  const auto start = Clock::now();
  parallel_for(centers.size(), threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> scratch;
    scratch.reserve(k);
    InadPair pair;
    for (std::size_t i = begin; i < end; ++i) {
      const std::span<const PointId> nb(knn.data() + i * stride, k);
      if (inad_at(normals, centers[i], nb, outlier_rate, scratch, pair)) sink[i] = pair.mu + pair.sigma;
    }
  });
  const auto stop = Clock::now();
  double total = 0.0;
  for (double v : sink) total += v;
  g_sink = g_sink + total;
  return std::chrono::duration<double, std::micro>(stop - start).count() / static_cast<double>(centers.size());
}

}  // namespace

std::vector<BenchRow> bench_inad(const PointCloud& cloud, const NormalField& normals, const BenchParams& params) {
  if (params.k_list.empty()) throw Error(Errc::invalid_argument, "empty k list");
  if (params.repetitions == 0) throw Error(Errc::invalid_argument, "repetitions must be >= 1");
  if (normals.size() != cloud.size()) throw Error(Errc::length_mismatch, "normal field does not match cloud");
  if (std::any_of(params.k_list.begin(), params.k_list.end(), [](std::size_t k) { return k == 0; })) {
    throw Error(Errc::invalid_argument, "k must be >= 1");
  }
  const std::size_t k_max = *std::max_element(params.k_list.begin(), params.k_list.end());
  if (cloud.size() <= k_max) {
    throw Error(Errc::insufficient_density,
                fmt::format("cloud has {} points; k = {} needs at least {}", cloud.size(), k_max, k_max + 1));
  }

  std::vector<PointId> centers;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (normals.valid[i]) centers.push_back(static_cast<PointId>(i));
  }
  if (centers.empty()) throw Error(Errc::no_valid_points, "no point has a valid normal");
  if (params.max_points > 0 && centers.size() > params.max_points) {
    std::vector<PointId> picked;
    const double step = static_cast<double>(centers.size()) / static_cast<double>(params.max_points);
    for (std::size_t i = 0; i < params.max_points; ++i) {
      picked.push_back(centers[static_cast<std::size_t>(static_cast<double>(i) * step)]);
    }
    centers = std::move(picked);
  }

  const KdTree index(cloud);
  std::vector<PointId> knn(centers.size() * k_max);
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const auto nb = index.k_nearest(centers[i], k_max);
    std::copy(nb.begin(), nb.end(), knn.begin() + static_cast<std::ptrdiff_t>(i * k_max));
  }

  std::vector<BenchRow> rows;
  for (const std::size_t k : params.k_list) {
    timed_pass(normals, centers, knn, k_max, k, params.outlier_rate, params.threads);
    std::vector<double> samples;
    for (std::size_t r = 0; r < params.repetitions; ++r) {
      samples.push_back(timed_pass(normals, centers, knn, k_max, k, params.outlier_rate, params.threads));
    }
    std::sort(samples.begin(), samples.end());
    const std::size_t n = samples.size();
    const double median = n % 2 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
    rows.push_back({k, median, samples.front(), samples.back(), centers.size()});
  }
  return rows;
}

double loglog_slope(const std::vector<BenchRow>& rows) {
  if (rows.size() < 2) throw Error(Errc::invalid_argument, "slope needs at least two rows");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : rows) {
    const double x = std::log(static_cast<double>(r.k));
    const double y = std::log(r.median_us);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(rows.size());
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw Error(Errc::invalid_argument, "slope needs at least two distinct k");
  return (n * sxy - sx * sy) / den;
}

std::string bench_table(const std::vector<BenchRow>& rows) {
  std::string out = fmt::format("{:>6} {:>12} {:>12} {:>12} {:>8}\n", "k", "median_us", "min_us", "max_us", "points");
  for (const auto& r : rows) {
    out += fmt::format("{:>6} {:>12.3f} {:>12.3f} {:>12.3f} {:>8}\n", r.k, r.median_us, r.min_us, r.max_us, r.points);
  }
  return out;
}

std::string bench_json(const std::vector<BenchRow>& rows, unsigned threads) {
  nlohmann::ordered_json doc;
  doc["threads"] = threads;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    arr.push_back(
        {{"k", r.k}, {"median_us", r.median_us}, {"min_us", r.min_us}, {"max_us", r.max_us}, {"points", r.points}});
  }
  doc["rows"] = arr;
  if (rows.size() >= 2) doc["loglog_slope"] = loglog_slope(rows);
  return doc.dump(2) + "\n";
}

}  // namespace shapebp
