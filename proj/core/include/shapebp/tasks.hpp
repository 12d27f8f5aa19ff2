#pragma once

#include "shapebp/pipeline.hpp"
#include "shapebp/point_cloud.hpp"
#include "shapebp/shape_histogram.hpp"

namespace shapebp {

struct TaskConfig {
  double r_classify = 0.03;
  double r_edge = 0.006;
  double outlier_rate = 1.0;
  std::size_t bins_mu = 10;
  std::size_t bins_sigma = 10;
  double tau = 0.5;

  /// Requires r_edge < r_classify and 0 < tau < 1.
  void validate() const;
  HistogramParams histogram_params() const { return {bins_mu, bins_sigma, 90.0, 45.0}; }
};

/// Likelihood of the complementary class: 1 - planar score at valid points.
/// `s + complement(s)` is exactly 1.0 in double precision for s in [0, 1].
LikelihoodField complement(const LikelihoodField& planar);

/// Planar where the planar score >= tau, curved otherwise; invalid points
/// are unlabeled.
LabelMask classify_binary(const LikelihoodField& planar, double tau);

/// Edge where the edge likelihood (1 - planar) >= tau, planar otherwise.
LabelMask label_edges(const LikelihoodField& edge_likelihood, double tau);

struct EdgeResult {
  LabelMask labels;
  LikelihoodField edge_likelihood;
};

/// Back-projects a planar histogram built at r_edge onto the cloud (analyzed
/// at config.r_edge) and thresholds the complement.
EdgeResult detect_edges(const PointCloud& cloud, const ShapeHistogram& plane_histogram, const TaskConfig& config,
                        const AnalysisParams& analysis);

struct ClassifyResult {
  LabelMask labels;
  LikelihoodField planar_likelihood;
};

/// Binary planar/curved classification at config.r_classify.
ClassifyResult classify_cloud(const PointCloud& cloud, const ShapeHistogram& plane_histogram,
                              const TaskConfig& config, const AnalysisParams& analysis);

}  // namespace shapebp
