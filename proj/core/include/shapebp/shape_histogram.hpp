#pragma once

#include "shapebp/inad.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace shapebp {

struct HistogramParams {
  std::size_t bins_mu = 10;
  std::size_t bins_sigma = 10;
  double mu_max = 90.0;
  double sigma_max = 45.0;

  void validate() const;
  bool operator==(const HistogramParams&) const = default;
};

/// floor(value * k / range_max), clamped to [0, k-1]. Throws negative-value
/// for value < 0 (or NaN).
std::size_t bin_id(double value, double range_max, std::size_t k);

/// Raw (un-normalized) occupancy of the (mu, sigma) grid, row-major in mu.
struct BinCounts {
  HistogramParams params;
  std::vector<std::uint64_t> counts;

  std::uint64_t at(std::size_t i_mu, std::size_t i_sigma) const { return counts[i_mu * params.bins_sigma + i_sigma]; }
  std::uint64_t total() const noexcept;
  bool operator==(const BinCounts&) const = default;
};

BinCounts count_bins(const InadField& field, const HistogramParams& params);

/// Max-normalized 2D histogram of INAD pairs: the fullest bin is exactly 1.
struct ShapeHistogram {
  static constexpr int kVersion = 1;

  HistogramParams params;
  std::vector<double> bins;  ///< row-major, index = i_mu * bins_sigma + i_sigma
  std::uint64_t sample_count = 0;
  double source_r = 0.0;

  double at(std::size_t i_mu, std::size_t i_sigma) const { return bins[i_mu * params.bins_sigma + i_sigma]; }
  /// Histogram value at the bin an INAD pair falls into.
  double lookup(const InadPair& pair) const;

  /// Throws invariant-violation if bins are outside [0, 1], the grid size is
  /// wrong, or a non-empty histogram is not max-normalized.
  void validate() const;
};

ShapeHistogram normalize(const BinCounts& counts, double source_r);

/// Throws no-valid-points when the field has no valid pair.
ShapeHistogram build_histogram(const InadField& field, const HistogramParams& params);

struct LikelihoodField {
  std::vector<double> scores;
  std::vector<std::uint8_t> valid;
  double radius = 0.0;    ///< radius of the INAD field that was scored
  double source_r = 0.0;  ///< radius the histogram was built at
  bool radius_mismatch = false;

  std::size_t size() const noexcept { return scores.size(); }
};

/// Scores every valid point with the histogram value of its INAD bin.
/// Invalid points stay invalid (score 0). Sets radius_mismatch when the field
/// radius differs from the histogram's source radius; scoring still happens.
LikelihoodField back_project(const ShapeHistogram& histogram, const InadField& field);

/// Versioned JSON document:
/// {format, version, k_mu, k_sigma, mu_range, sigma_range, source_r, sample_count, bins}.
std::string serialize(const ShapeHistogram& histogram);
/// Throws parse-error (malformed JSON), schema-mismatch (missing/mistyped
/// fields, wrong version, wrong bin count) or invariant-violation.
ShapeHistogram deserialize(const std::string& text);

void save_histogram(const ShapeHistogram& histogram, const std::filesystem::path& path);
ShapeHistogram load_histogram(const std::filesystem::path& path);

/// CSV with header "point_id,score,valid".
void write_likelihood_csv(const LikelihoodField& field, const std::filesystem::path& path);

}  // namespace shapebp
