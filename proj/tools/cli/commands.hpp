#pragma once

#include <CLI11.hpp>

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace shapebp::cli {

struct Common {
  unsigned threads = 1;
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool timings = false;  ///< wall times in reports (makes them run-dependent)
};

struct Analysis {
  double radius = 0.0;
  double normal_radius = 0.0;
  double outlier_rate = 1.0;
  std::size_t min_neighbors = 5;
  std::vector<double> viewpoint{0.0, 0.0, 0.0};
  bool use_cloud_normals = false;
};

struct Bins {
  std::size_t mu = 10;
  std::size_t sigma = 10;
  double mu_max = 90.0;
  double sigma_max = 45.0;
};

using Action = std::function<void()>;

Action add_synth(CLI::App& app, const Common& common);
Action add_histogram(CLI::App& app, const Common& common);
Action add_backproject(CLI::App& app, const Common& common);
Action add_classify(CLI::App& app, const Common& common);
Action add_edges(CLI::App& app, const Common& common);
Action add_eval(CLI::App& app, const Common& common);
Action add_bench(CLI::App& app, const Common& common);
Action add_ransac(CLI::App& app, const Common& common);

}  // namespace shapebp::cli
