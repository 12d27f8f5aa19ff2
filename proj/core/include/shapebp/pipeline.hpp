#pragma once

#include "shapebp/inad.hpp"
#include "shapebp/kd_tree.hpp"
#include "shapebp/normals.hpp"
#include "shapebp/shape_histogram.hpp"

namespace shapebp {

/// Parameters for the cloud -> normals -> INAD chain at a single scale.
struct AnalysisParams {
  double radius = 0.01;
  /// Radius for normal estimation; 0 means "same as radius".
  double normal_radius = 0.0;
  double outlier_rate = 1.0;
  std::size_t min_neighbors = 5;
  Vec3 viewpoint = Vec3::Zero();
  unsigned threads = 1;

  double effective_normal_radius() const noexcept { return normal_radius > 0.0 ? normal_radius : radius; }
};

struct SurfaceAnalysis {
  NormalField normals;
  InadField inad;
};

/// Estimates normals (unless the cloud already carries them and
/// `reuse_cloud_normals` is set) and computes the INAD field.
SurfaceAnalysis analyze_surface(const PointCloud& cloud, const KdTree& index, const AnalysisParams& params,
                                bool reuse_cloud_normals = false);
SurfaceAnalysis analyze_surface(const PointCloud& cloud, const AnalysisParams& params);

/// Shape histogram of a sample surface.
ShapeHistogram sample_histogram(const PointCloud& sample, const AnalysisParams& analysis,
                                const HistogramParams& histogram);

/// Back-projects `histogram` onto `target`, analyzed at the histogram's
/// source radius unless `analysis.radius` says otherwise.
LikelihoodField back_project_cloud(const ShapeHistogram& histogram, const PointCloud& target,
                                   const AnalysisParams& analysis);

}  // namespace shapebp
