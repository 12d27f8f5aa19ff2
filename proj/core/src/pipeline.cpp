#include "shapebp/pipeline.hpp"

#include "shapebp/error.hpp"

namespace shapebp {

SurfaceAnalysis analyze_surface(const PointCloud& cloud, const KdTree& index, const AnalysisParams& params,
                                bool reuse_cloud_normals) {
  SurfaceAnalysis out;
  if (reuse_cloud_normals && cloud.has_normals()) {
    out.normals = NormalField::from_cloud(cloud);
    out.normals.radius = params.effective_normal_radius();
    out.normals.viewpoint = params.viewpoint;
  } else {
    out.normals = estimate_all_normals(
        cloud, index, {params.effective_normal_radius(), params.viewpoint, params.min_neighbors, params.threads});
  }
  out.inad = compute_inad_field(cloud, out.normals, index, {params.radius, params.outlier_rate, params.threads});
  return out;
}

SurfaceAnalysis analyze_surface(const PointCloud& cloud, const AnalysisParams& params) {
  if (cloud.empty()) throw Error(Errc::empty_cloud, "cannot analyze an empty cloud");
  const KdTree index(cloud);
  return analyze_surface(cloud, index, params);
}

ShapeHistogram sample_histogram(const PointCloud& sample, const AnalysisParams& analysis,
                                const HistogramParams& histogram) {
  return build_histogram(analyze_surface(sample, analysis).inad, histogram);
}

LikelihoodField back_project_cloud(const ShapeHistogram& histogram, const PointCloud& target,
                                   const AnalysisParams& analysis) {
  return back_project(histogram, analyze_surface(target, analysis).inad);
}

}  // namespace shapebp
