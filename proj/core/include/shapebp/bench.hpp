#pragma once

#include "shapebp/normals.hpp"
#include "shapebp/point_cloud.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace shapebp {

struct BenchParams {
  std::vector<std::size_t> k_list{10, 100, 200, 300, 400, 500};
  std::size_t repetitions = 5;
  double outlier_rate = 1.0;
  std::size_t max_points = 0;  ///< 0 times every point
  unsigned threads = 1;
};

struct BenchRow {
  std::size_t k = 0;
  double median_us = 0.0;  ///< median over repetitions of the per-point mean
  double min_us = 0.0;
  double max_us = 0.0;
  std::size_t points = 0;
};

/// Times angles + rejection + statistics per point using exactly the k
/// nearest neighbors. One untimed warm-up pass precedes the repetitions.
/// Throws insufficient-density when the cloud has <= max(k) points.
std::vector<BenchRow> bench_inad(const PointCloud& cloud, const NormalField& normals, const BenchParams& params);

/// Least-squares slope of log(median_us) against log(k).
double loglog_slope(const std::vector<BenchRow>& rows);

std::string bench_table(const std::vector<BenchRow>& rows);
std::string bench_json(const std::vector<BenchRow>& rows, unsigned threads);

}  // namespace shapebp
