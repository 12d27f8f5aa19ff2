#include "commands.hpp"

#include <shapebp/bench.hpp>
#include <shapebp/cloud_io.hpp>
#include <shapebp/error.hpp>
#include <shapebp/metrics.hpp>
#include <shapebp/pipeline.hpp>
#include <shapebp/ransac.hpp>
#include <shapebp/synth.hpp>
#include <shapebp/tasks.hpp>

#include <fmt/format.h>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace shapebp::cli {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, fmt::format("cannot open '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, fmt::format("cannot open '{}' for writing", path));
  out << text;
  if (!out) throw Error(Errc::io_error, fmt::format("write failed for '{}'", path));
}

// Resolved parameters land next to the primary output as <output>.config.json.
void write_sidecar(const std::string& primary, const std::string& command, Json config) {
  if (primary.empty() || primary == "-") return;
  Json doc;
  doc["command"] = command;
  doc["tool_version"] = "0.1.0";
  for (auto& [key, value] : config.items()) doc[key] = value;
  write_text(primary + ".config.json", doc.dump(2) + "\n");
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void note(const std::string& msg) { std::cerr << msg << '\n'; }

CloudFormat format_for(const std::string& path, const std::string& explicit_format) {
  if (!explicit_format.empty()) {
    if (auto f = parse_cloud_format(explicit_format)) return *f;
    throw Error(Errc::invalid_argument, fmt::format("unknown format '{}' (pcd|ply|xyz)", explicit_format));
  }
  if (auto f = format_from_extension(path)) return *f;
  throw Error(Errc::unsupported_format, fmt::format("cannot infer a cloud format from '{}'", path));
}

PointCloud load_input(const std::string& path, bool drop_non_finite) {
  LoadOptions opts;
  opts.drop_non_finite = drop_non_finite;
  return load_cloud(path, format_for(path, ""), opts);
}

void add_common_io(CLI::App& sub, bool& drop_non_finite) {
  sub.add_flag("--drop-non-finite", drop_non_finite, "Skip points with NaN/Inf coordinates instead of failing");
}

void add_analysis(CLI::App& sub, Analysis& a, bool radius_required, double radius_default) {
  a.radius = radius_default;
  auto* r = sub.add_option("--radius", a.radius, "Neighborhood radius in meters");
  if (radius_required) r->required();
  r->check(CLI::PositiveNumber);
  sub.add_option("--normal-radius", a.normal_radius, "Normal-estimation radius (default: --radius)")
      ->check(CLI::NonNegativeNumber);
  sub.add_option("--outlier-rate", a.outlier_rate, "Outlier rejection rate c in |a - mu| / sigma <= c")
      ->check(CLI::PositiveNumber);
  sub.add_option("--min-neighbors", a.min_neighbors, "Minimum neighbors for a valid normal");
  sub.add_option("--viewpoint", a.viewpoint, "Normal orientation viewpoint x,y,z")->delimiter(',')->expected(3);
  sub.add_flag("--use-cloud-normals", a.use_cloud_normals, "Reuse normals stored in the input cloud");
}

void add_bins(CLI::App& sub, Bins& b) {
  sub.add_option("--bins-mu", b.mu, "Histogram bins along mu")->check(CLI::PositiveNumber);
  sub.add_option("--bins-sigma", b.sigma, "Histogram bins along sigma")->check(CLI::PositiveNumber);
  sub.add_option("--mu-max", b.mu_max, "Upper end of the mu range in degrees")->check(CLI::PositiveNumber);
  sub.add_option("--sigma-max", b.sigma_max, "Upper end of the sigma range in degrees")->check(CLI::PositiveNumber);
}

AnalysisParams to_params(const Analysis& a, const Common& common) {
  AnalysisParams p;
  p.radius = a.radius;
  p.normal_radius = a.normal_radius;
  p.outlier_rate = a.outlier_rate;
  p.min_neighbors = a.min_neighbors;
  p.viewpoint = Vec3(a.viewpoint[0], a.viewpoint[1], a.viewpoint[2]);
  p.threads = common.threads;
  return p;
}

HistogramParams to_params(const Bins& b) { return {b.mu, b.sigma, b.mu_max, b.sigma_max}; }

Json analysis_json(const AnalysisParams& p) {
  return {{"radius", p.radius},
          {"normal_radius", p.effective_normal_radius()},
          {"outlier_rate", p.outlier_rate},
          {"min_neighbors", p.min_neighbors},
          {"viewpoint", {p.viewpoint.x(), p.viewpoint.y(), p.viewpoint.z()}}};
}

Json bins_json(const HistogramParams& h) {
  return {{"bins_mu", h.bins_mu}, {"bins_sigma", h.bins_sigma}, {"mu_max", h.mu_max}, {"sigma_max", h.sigma_max}};
}

std::vector<Rgb> likelihood_colors(const LikelihoodField& field) {
  std::vector<Rgb> colors(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    colors[i] = field.valid[i] ? likelihood_color(field.scores[i]) : label_color(Label::unlabeled);
  }
  return colors;
}

std::vector<Rgb> label_colors(const LabelMask& labels) {
  std::vector<Rgb> colors(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) colors[i] = label_color(labels[i]);
  return colors;
}

std::vector<Label> parse_classes(const std::vector<std::string>& names) {
  std::vector<Label> out;
  for (const auto& n : names) {
    if (n == "planar") out.push_back(Label::planar);
    else if (n == "curved") out.push_back(Label::curved);
    else if (n == "edge") out.push_back(Label::edge);
    else throw Error(Errc::invalid_argument, fmt::format("unknown class '{}' (planar|curved|edge)", n));
  }
  return out;
}

void emit_report(const MetricsReport& report, const std::string& path) {
  std::cerr << to_table(report);
  if (!path.empty()) write_text(path, to_json(report));
}

void warn_radius(const ShapeHistogram& h, double radius) {
  if (std::abs(h.source_r - radius) > 1e-12 * std::max(1.0, std::abs(radius))) {
    note(fmt::format("warning: histogram was built at r = {} m but the target is analyzed at r = {} m", h.source_r,
                     radius));
  }
}

// Plane-class histogram for the labeling tasks: loaded, or built from a sample.
struct PlaneSource {
  std::string histogram;
  std::string sample;
  Bins bins;

  void add(CLI::App& sub) {
    auto* h = sub.add_option("--histogram", histogram, "Planar shape histogram (JSON)");
    auto* s = sub.add_option("--sample", sample, "Planar sample cloud to build the histogram from");
    h->excludes(s);
    add_bins(sub, bins);
  }

  ShapeHistogram resolve(const AnalysisParams& params, bool drop_non_finite) const {
    if (!histogram.empty()) return load_histogram(histogram);
    if (sample.empty()) throw Error(Errc::invalid_argument, "one of --histogram or --sample is required");
    return sample_histogram(load_input(sample, drop_non_finite), params, to_params(bins));
  }

  Json json() const {
    if (!histogram.empty()) return {{"histogram", histogram}};
    return {{"sample", sample}, {"bins", bins_json(to_params(bins))}};
  }
};

}  // namespace

Action add_synth(CLI::App& app, const Common& common) {
  struct Opts {
    std::string spec, out, labels, format;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("synth", "Generate a synthetic cloud and ground-truth labels from a JSON scene");
  sub->add_option("--spec", o->spec, "Scene description (JSON)")->required();
  sub->add_option("--out", o->out, "Output cloud (.pcd, .ply or .xyz)")->required();
  sub->add_option("--labels", o->labels, "Output labels (default: <out>.labels)");
  sub->add_option("--format", o->format, "Cloud format override (pcd|ply|xyz)");
  return [o, &common] {
    SceneSpec spec = parse_scene_spec(read_text(o->spec));
    if (common.seed_given) spec.seed = common.seed;
    const auto t0 = Clock::now();
    const SyntheticCloud scene = generate(spec);
    const std::string labels = o->labels.empty() ? o->out + ".labels" : o->labels;
    save_cloud(scene.cloud, o->out, format_for(o->out, o->format));
    save_labels(scene.labels, labels);
    note(fmt::format("synth: {} points in {:.3f} s", scene.cloud.size(), seconds_since(t0)));
    write_sidecar(o->out, "synth",
                  {{"spec", Json::parse(scene_spec_to_json(spec))},
                   {"labels", labels},
                   {"points", scene.cloud.size()},
                   {"viewpoint", {scene.viewpoint.x(), scene.viewpoint.y(), scene.viewpoint.z()}}});
  };
}

Action add_histogram(CLI::App& app, const Common& common) {
  struct Opts {
    std::string cloud, out, inad_csv;
    Analysis analysis;
    Bins bins;
    bool drop = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("histogram", "Build a shape histogram from a sample cloud");
  sub->add_option("--cloud", o->cloud, "Sample cloud")->required();
  sub->add_option("--out", o->out, "Output histogram (JSON)")->required();
  sub->add_option("--inad-csv", o->inad_csv, "Also write per-point mu/sigma");
  add_analysis(*sub, o->analysis, true, 0.0);
  add_bins(*sub, o->bins);
  add_common_io(*sub, o->drop);
  return [o, &common] {
    const PointCloud cloud = load_input(o->cloud, o->drop);
    if (cloud.empty()) throw Error(Errc::empty_cloud, fmt::format("'{}' has no points", o->cloud));
    const AnalysisParams params = to_params(o->analysis, common);
    const HistogramParams hp = to_params(o->bins);
    hp.validate();
    const auto t0 = Clock::now();
    const KdTree index(cloud);
    const SurfaceAnalysis analysis = analyze_surface(cloud, index, params, o->analysis.use_cloud_normals);
    const ShapeHistogram h = build_histogram(analysis.inad, hp);
    save_histogram(h, o->out);
    if (!o->inad_csv.empty()) write_inad_csv(analysis.inad, o->inad_csv);
    note(fmt::format("histogram: {} of {} points valid, {:.3f} s", h.sample_count, cloud.size(), seconds_since(t0)));
    write_sidecar(o->out, "histogram",
                  {{"cloud", o->cloud}, {"analysis", analysis_json(params)}, {"histogram", bins_json(hp)}});
  };
}

Action add_backproject(CLI::App& app, const Common& common) {
  struct Opts {
    std::string histogram, cloud, out_csv, out_ply;
    Analysis analysis;
    bool drop = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("backproject", "Score every point of a cloud against a shape histogram");
  sub->add_option("--histogram", o->histogram, "Shape histogram (JSON)")->required();
  sub->add_option("--cloud", o->cloud, "Target cloud")->required();
  sub->add_option("--out", o->out_csv, "Output likelihood CSV")->required();
  sub->add_option("--ply", o->out_ply, "Colorized PLY (green = 1, blue = 0)");
  add_analysis(*sub, o->analysis, false, 0.0);
  add_common_io(*sub, o->drop);
  return [o, &common] {
    const ShapeHistogram h = load_histogram(o->histogram);
    const PointCloud cloud = load_input(o->cloud, o->drop);
    if (cloud.empty()) throw Error(Errc::empty_cloud, fmt::format("'{}' has no points", o->cloud));
    AnalysisParams params = to_params(o->analysis, common);
    if (params.radius == 0.0) params.radius = h.source_r;
    warn_radius(h, params.radius);
    const KdTree index(cloud);
    const LikelihoodField field =
        back_project(h, analyze_surface(cloud, index, params, o->analysis.use_cloud_normals).inad);
    write_likelihood_csv(field, o->out_csv);
    if (!o->out_ply.empty()) save_colored_ply(cloud, likelihood_colors(field), o->out_ply);
    write_sidecar(o->out_csv, "backproject",
                  {{"histogram", o->histogram},
                   {"cloud", o->cloud},
                   {"analysis", analysis_json(params)},
                   {"source_r", h.source_r},
                   {"radius_mismatch", field.radius_mismatch}});
  };
}

namespace {

struct LabelingOpts {
  std::string cloud, out_labels, out_ply, out_csv, gt, report;
  Analysis analysis;
  PlaneSource plane;
  double tau = 0.5;
  bool drop = false;
};

void add_labeling(CLI::App& sub, LabelingOpts& o, double radius_default) {
  sub.add_option("--cloud", o.cloud, "Input cloud")->required();
  sub.add_option("--out", o.out_labels, "Output labels")->required();
  sub.add_option("--ply", o.out_ply, "Colorized PLY of the labels");
  sub.add_option("--likelihood-csv", o.out_csv, "Per-point likelihood CSV");
  sub.add_option("--gt", o.gt, "Ground-truth labels; enables the metrics report");
  sub.add_option("--report", o.report, "Metrics report (JSON, '-' for stdout)");
  sub.add_option("--threshold", o.tau, "Decision threshold tau")->check(CLI::Range(0.0, 1.0));
  add_analysis(sub, o.analysis, false, radius_default);
  o.plane.add(sub);
  add_common_io(sub, o.drop);
}

void finish_labeling(const LabelingOpts& o, const std::string& command, const PointCloud& cloud,
                     const LabelMask& labels, const LikelihoodField& likelihood, const AnalysisParams& params,
                     const std::vector<Label>& classes, double seconds, bool timings) {
  save_labels(labels, o.out_labels);
  if (!o.out_ply.empty()) save_colored_ply(cloud, label_colors(labels), o.out_ply);
  if (!o.out_csv.empty()) write_likelihood_csv(likelihood, o.out_csv);
  if (!o.gt.empty()) {
    const LabelMask gt = load_labels(o.gt);
    check_pairing(cloud, gt);
    MetricsReport report = metrics(labels, gt, classes);
    report.parameters = {{"r", params.radius},
                         {"c", params.outlier_rate},
                         {"k_mu", static_cast<double>(o.plane.bins.mu)},
                         {"k_sigma", static_cast<double>(o.plane.bins.sigma)},
                         {"tau", o.tau}};
    if (timings) report.timings_s = {{command, seconds}};
    emit_report(report, o.report);
  } else if (!o.report.empty()) {
    throw Error(Errc::invalid_argument, "--report needs --gt");
  }
  Json cfg{{"cloud", o.cloud}, {"analysis", analysis_json(params)}, {"threshold", o.tau}};
  cfg["plane"] = o.plane.json();
  if (!o.gt.empty()) cfg["gt"] = o.gt;
  write_sidecar(o.out_labels, command, cfg);
}

}  // namespace

Action add_classify(CLI::App& app, const Common& common) {
  auto o = std::make_shared<LabelingOpts>();
  auto* sub = app.add_subcommand("classify", "Binary planar/curved classification");
  add_labeling(*sub, *o, 0.03);
  return [o, &common] {
    const PointCloud cloud = load_input(o->cloud, o->drop);
    if (cloud.empty()) throw Error(Errc::empty_cloud, fmt::format("'{}' has no points", o->cloud));
    const AnalysisParams params = to_params(o->analysis, common);
    const auto t0 = Clock::now();
    const ShapeHistogram h = o->plane.resolve(params, o->drop);
    warn_radius(h, params.radius);
    TaskConfig task;
    task.r_classify = params.radius;
    task.r_edge = std::min(task.r_edge, 0.5 * params.radius);
    task.outlier_rate = params.outlier_rate;
    task.bins_mu = h.params.bins_mu;
    task.bins_sigma = h.params.bins_sigma;
    task.tau = o->tau;
    const ClassifyResult result = classify_cloud(cloud, h, task, params);
    finish_labeling(*o, "classify", cloud, result.labels, result.planar_likelihood, params,
                    {Label::planar, Label::curved}, seconds_since(t0), common.timings);
  };
}

Action add_edges(CLI::App& app, const Common& common) {
  auto o = std::make_shared<LabelingOpts>();
  auto* sub = app.add_subcommand("edges", "Edge detection with the complement of a planar histogram");
  add_labeling(*sub, *o, 0.006);
  return [o, &common] {
    const PointCloud cloud = load_input(o->cloud, o->drop);
    if (cloud.empty()) throw Error(Errc::empty_cloud, fmt::format("'{}' has no points", o->cloud));
    const AnalysisParams params = to_params(o->analysis, common);
    const auto t0 = Clock::now();
    const ShapeHistogram h = o->plane.resolve(params, o->drop);
    warn_radius(h, params.radius);
    TaskConfig task;
    task.r_edge = params.radius;
    task.r_classify = std::max(task.r_classify, 2.0 * params.radius);
    task.outlier_rate = params.outlier_rate;
    task.bins_mu = h.params.bins_mu;
    task.bins_sigma = h.params.bins_sigma;
    task.tau = o->tau;
    const EdgeResult result = detect_edges(cloud, h, task, params);
    finish_labeling(*o, "edges", cloud, result.labels, result.edge_likelihood, params, {Label::edge},
                    seconds_since(t0), common.timings);
  };
}

Action add_eval(CLI::App& app, const Common&) {
  struct Opts {
    std::string pred, gt, report;
    std::vector<std::string> classes{"planar", "curved"};
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("eval", "Precision/recall/F1/IoU of predicted labels");
  sub->add_option("--pred", o->pred, "Predicted labels")->required();
  sub->add_option("--gt", o->gt, "Ground-truth labels")->required();
  sub->add_option("--classes", o->classes, "Classes to score (planar,curved,edge)")->delimiter(',');
  sub->add_option("--report", o->report, "Metrics report (JSON, '-' for stdout)");
  return [o] {
    const MetricsReport report = metrics(load_labels(o->pred), load_labels(o->gt), parse_classes(o->classes));
    emit_report(report, o->report);
    write_sidecar(o->report, "eval", {{"pred", o->pred}, {"gt", o->gt}, {"classes", o->classes}});
  };
}

Action add_bench(CLI::App& app, const Common& common) {
  struct Opts {
    std::string cloud, out;
    std::vector<std::size_t> k_list{10, 100, 500};
    std::size_t repetitions = 5;
    std::size_t max_points = 2000;
    double radius = 0.01;
    bool drop = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("bench", "Per-point INAD timing for a sweep of neighbor counts");
  sub->add_option("--cloud", o->cloud, "Cloud to time on (default: synthetic 1 mm cylinder)");
  sub->add_option("--k", o->k_list, "Neighbor counts")->delimiter(',');
  sub->add_option("--repetitions", o->repetitions, "Timed repetitions per k")->check(CLI::PositiveNumber);
  sub->add_option("--max-points", o->max_points, "Points timed per pass (0 = all)");
  sub->add_option("--radius", o->radius, "Normal-estimation radius")->check(CLI::PositiveNumber);
  sub->add_option("--out", o->out, "Timing table (JSON, '-' for stdout)");
  add_common_io(*sub, o->drop);
  return [o, &common] {
    PointCloud cloud;
    Vec3 viewpoint = Vec3::Zero();
    if (o->cloud.empty()) {
      const SyntheticCloud scene = gen_cylinder(0.05, 0.2, 0.001, 0.0, common.seed);
      cloud = scene.cloud;
      viewpoint = scene.viewpoint;
    } else {
      cloud = load_input(o->cloud, o->drop);
    }
    if (cloud.empty()) throw Error(Errc::empty_cloud, "bench cloud has no points");
    const KdTree index(cloud);
    const NormalField normals = estimate_all_normals(cloud, index, {o->radius, viewpoint, 5, common.threads});
    BenchParams bp;
    bp.k_list = o->k_list;
    bp.repetitions = o->repetitions;
    bp.max_points = o->max_points;
    bp.threads = common.threads;
    const auto rows = bench_inad(cloud, normals, bp);
    std::cerr << bench_table(rows);
    if (!o->out.empty()) write_text(o->out, bench_json(rows, common.threads));
    write_sidecar(o->out, "bench",
                  {{"cloud", o->cloud.empty() ? "synthetic-cylinder" : o->cloud},
                   {"k", o->k_list},
                   {"repetitions", o->repetitions},
                   {"max_points", o->max_points},
                   {"normal_radius", o->radius},
                   {"threads", common.threads}});
  };
}

Action add_ransac(CLI::App& app, const Common& common) {
  struct Opts {
    std::string cloud, out_labels, gt, report, models;
    std::string model = "cylinder";
    RansacConfig config;
    std::size_t instances = 1;
    double normal_radius = 0.01;
    bool use_cloud_normals = false;
    bool drop = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("ransac", "RANSAC plane/cylinder extraction baseline");
  sub->add_option("--cloud", o->cloud, "Input cloud")->required();
  sub->add_option("--out", o->out_labels, "Output labels (inliers curved for cylinders, planar for planes)")
      ->required();
  sub->add_option("--model", o->model, "plane|cylinder");
  sub->add_option("--instances", o->instances, "Extraction rounds")->check(CLI::PositiveNumber);
  sub->add_option("--inlier-threshold", o->config.inlier_threshold, "Inlier distance in meters")
      ->check(CLI::PositiveNumber);
  sub->add_option("--iterations", o->config.max_iterations, "Hypotheses per round")->check(CLI::PositiveNumber);
  sub->add_option("--min-inliers", o->config.min_inliers, "Minimum consensus size");
  sub->add_option("--normal-threshold", o->config.normal_threshold_deg, "Cylinder normal deviation in degrees");
  sub->add_option("--min-radius", o->config.min_radius, "Smallest accepted cylinder radius");
  sub->add_option("--max-radius", o->config.max_radius, "Largest accepted cylinder radius");
  sub->add_option("--normal-radius", o->normal_radius, "Normal-estimation radius")->check(CLI::PositiveNumber);
  sub->add_flag("--use-cloud-normals", o->use_cloud_normals, "Reuse normals stored in the input cloud");
  sub->add_option("--gt", o->gt, "Ground-truth labels; enables the metrics report");
  sub->add_option("--report", o->report, "Metrics report (JSON, '-' for stdout)");
  sub->add_option("--models", o->models, "Fitted model parameters (JSON)");
  add_common_io(*sub, o->drop);
  return [o, &common] {
    RansacConfig config = o->config;
    config.model = parse_model_kind(o->model);
    config.seed = common.seed;
    config.threads = common.threads;
    const PointCloud cloud = load_input(o->cloud, o->drop);
    if (cloud.empty()) throw Error(Errc::empty_cloud, fmt::format("'{}' has no points", o->cloud));
    const auto t0 = Clock::now();
    NormalField normals;
    if (o->use_cloud_normals && cloud.has_normals()) {
      normals = NormalField::from_cloud(cloud);
    } else {
      const KdTree index(cloud);
      normals = estimate_all_normals(cloud, index, {o->normal_radius, Vec3::Zero(), 5, common.threads});
    }
    const auto found = extract_instances(cloud, normals, config, o->instances);
    const Label label = config.model == RansacModelKind::cylinder ? Label::curved : Label::planar;
    const Label other = config.model == RansacModelKind::cylinder ? Label::planar : Label::curved;
    const LabelMask labels = instances_to_mask(cloud.size(), found, label, other);
    save_labels(labels, o->out_labels);
    note(fmt::format("ransac: {} of {} requested instances found", found.size(), o->instances));

    if (!o->models.empty()) {
      Json arr = Json::array();
      for (const auto& inst : found) {
        Json m;
        if (const auto* p = std::get_if<PlaneModel>(&inst.model)) {
          m = {{"type", "plane"}, {"normal", {p->normal.x(), p->normal.y(), p->normal.z()}}, {"offset", p->offset}};
        } else {
          const auto& c = std::get<CylinderModel>(inst.model);
          m = {{"type", "cylinder"},
               {"axis_point", {c.axis_point.x(), c.axis_point.y(), c.axis_point.z()}},
               {"axis", {c.axis.x(), c.axis.y(), c.axis.z()}},
               {"radius", c.radius}};
        }
        m["inliers"] = inst.inliers.size();
        arr.push_back(m);
      }
      write_text(o->models, arr.dump(2) + "\n");
    }
    if (!o->gt.empty()) {
      const LabelMask gt = load_labels(o->gt);
      check_pairing(cloud, gt);
      MetricsReport report = metrics(labels, gt, {label});
      report.parameters = {{"inlier_threshold", config.inlier_threshold},
                           {"iterations", static_cast<double>(config.max_iterations)},
                           {"instances", static_cast<double>(o->instances)}};
      if (common.timings) report.timings_s = {{"ransac", seconds_since(t0)}};
      emit_report(report, o->report);
    }
    write_sidecar(o->out_labels, "ransac",
                  {{"cloud", o->cloud},
                   {"model", o->model},
                   {"instances", o->instances},
                   {"inlier_threshold", config.inlier_threshold},
                   {"iterations", config.max_iterations},
                   {"min_inliers", config.min_inliers},
                   {"normal_threshold_deg", config.normal_threshold_deg},
                   {"min_radius", config.min_radius},
                   {"max_radius", std::isfinite(config.max_radius) ? Json(config.max_radius) : Json("inf")},
                   {"normal_radius", o->normal_radius},
                   {"seed", config.seed}});
  };
}

}  // namespace shapebp::cli
