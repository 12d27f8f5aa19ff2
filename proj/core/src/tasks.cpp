#include "shapebp/tasks.hpp"

#include "shapebp/error.hpp"

namespace shapebp {

void TaskConfig::validate() const {
  if (!(r_edge > 0.0) || !(r_classify > 0.0)) throw Error(Errc::non_positive_radius, "task radii must be > 0");
  if (!(r_edge < r_classify)) throw Error(Errc::invalid_argument, "r_edge must be smaller than r_classify");
  if (!(tau > 0.0 && tau < 1.0)) throw Error(Errc::invalid_argument, "tau must lie in (0, 1)");
  if (!(outlier_rate > 0.0)) throw Error(Errc::invalid_argument, "outlier rate must be > 0");
  histogram_params().validate();
}

LikelihoodField complement(const LikelihoodField& planar) {
  LikelihoodField out = planar;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out.valid[i]) out.scores[i] = 1.0 - planar.scores[i];
  }
  return out;
}

LabelMask classify_binary(const LikelihoodField& planar, double tau) {
  LabelMask labels(planar.size(), Label::unlabeled);
  for (std::size_t i = 0; i < planar.size(); ++i) {
    if (planar.valid[i]) labels[i] = planar.scores[i] >= tau ? Label::planar : Label::curved;
  }
  return labels;
}

LabelMask label_edges(const LikelihoodField& edge_likelihood, double tau) {
  LabelMask labels(edge_likelihood.size(), Label::unlabeled);
  for (std::size_t i = 0; i < edge_likelihood.size(); ++i) {
    if (edge_likelihood.valid[i]) labels[i] = edge_likelihood.scores[i] >= tau ? Label::edge : Label::planar;
  }
  return labels;
}

EdgeResult detect_edges(const PointCloud& cloud, const ShapeHistogram& plane_histogram, const TaskConfig& config,
                        const AnalysisParams& analysis) {
  config.validate();
  AnalysisParams at_edge = analysis;
  at_edge.radius = config.r_edge;
  at_edge.outlier_rate = config.outlier_rate;
  EdgeResult out;
  out.edge_likelihood = complement(back_project_cloud(plane_histogram, cloud, at_edge));
  out.labels = label_edges(out.edge_likelihood, config.tau);
  return out;
}

ClassifyResult classify_cloud(const PointCloud& cloud, const ShapeHistogram& plane_histogram,
                              const TaskConfig& config, const AnalysisParams& analysis) {
  config.validate();
  AnalysisParams at_scale = analysis;
  at_scale.radius = config.r_classify;
  at_scale.outlier_rate = config.outlier_rate;
  ClassifyResult out;
  out.planar_likelihood = back_project_cloud(plane_histogram, cloud, at_scale);
  out.labels = classify_binary(out.planar_likelihood, config.tau);
  return out;
}

}  // namespace shapebp
