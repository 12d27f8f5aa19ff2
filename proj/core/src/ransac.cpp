#include "shapebp/ransac.hpp"

#include "shapebp/error.hpp"
#include "shapebp/parallel.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <numbers>
#include <random>

namespace shapebp {

RansacModelKind parse_model_kind(const std::string& name) {
  if (name == "plane") return RansacModelKind::plane;
  if (name == "cylinder") return RansacModelKind::cylinder;
  throw Error(Errc::invalid_argument, fmt::format("unknown model '{}' (plane|cylinder)", name));
}

const char* to_string(RansacModelKind kind) noexcept {
  return kind == RansacModelKind::plane ? "plane" : "cylinder";
}

void RansacConfig::validate() const {
  if (!(inlier_threshold > 0.0)) throw Error(Errc::invalid_argument, "inlier_threshold must be > 0");
  if (max_iterations < 1) throw Error(Errc::invalid_argument, "max_iterations must be >= 1");
  if (!(min_radius >= 0.0) || !(max_radius > min_radius)) {
    throw Error(Errc::invalid_argument, "radius limits must satisfy 0 <= min < max");
  }
}

Vec3 CylinderModel::radial(const Vec3& p) const noexcept {
  const Vec3 d = p - axis_point;
  return d - d.dot(axis) * axis;
}

std::optional<PlaneModel> plane_from_points(const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 n = (b - a).cross(c - a);
  const double len = n.norm();
  const double scale = (b - a).norm() * (c - a).norm();
  if (!(len > 1e-9 * scale) || scale == 0.0) return std::nullopt;
  PlaneModel m;
  m.normal = n / len;
  m.offset = -m.normal.dot(a);
  return m;
}

std::optional<CylinderModel> cylinder_from_oriented_points(const Vec3& p1, const Vec3& n1, const Vec3& p2,
                                                           const Vec3& n2) {
  const Vec3 u = n1.cross(n2);
  const double s = u.norm();
  if (!(s > 1e-6)) return std::nullopt;
  // Closest points of the lines p1 + t n1 and p2 + v n2.
  const Vec3 w = p1 - p2;
  const double a = n1.dot(n1), b = n1.dot(n2), c = n2.dot(n2), d = n1.dot(w), e = n2.dot(w);
  const double den = a * c - b * b;
  if (!(den > 1e-12)) return std::nullopt;
  const double t = (b * e - c * d) / den;
  const double v = (a * e - b * d) / den;
  CylinderModel m;
  m.axis = u / s;
  m.axis_point = 0.5 * ((p1 + t * n1) + (p2 + v * n2));
  m.radius = 0.5 * (m.radial(p1).norm() + m.radial(p2).norm());
  if (!std::isfinite(m.radius)) return std::nullopt;
  return m;
}

namespace {

struct Evaluator {
  const PointCloud& cloud;
  const NormalField& normals;
  const RansacConfig& config;
  double cos_normal;

  bool is_inlier(const RansacModel& model, PointId id) const {
    const Vec3& p = cloud.points[id];
    if (const auto* plane = std::get_if<PlaneModel>(&model)) return plane->distance(p) <= config.inlier_threshold;
    const auto& cyl = std::get<CylinderModel>(model);
    const Vec3 r = cyl.radial(p);
    const double rn = r.norm();
    if (!(std::abs(rn - cyl.radius) <= config.inlier_threshold)) return false;
    if (config.normal_threshold_deg <= 0.0) return true;
    if (!normals.valid[id] || rn == 0.0) return false;
    return std::abs(normals.normals[id].dot(r)) / rn >= cos_normal;
  }

  std::optional<RansacModel> hypothesis(std::span<const PointId> sample) const {
    if (config.model == RansacModelKind::plane) {
      auto m = plane_from_points(cloud.points[sample[0]], cloud.points[sample[1]], cloud.points[sample[2]]);
      if (!m) return std::nullopt;
      return RansacModel(*m);
    }
    const PointId a = sample[0], b = sample[1];
    auto m = cylinder_from_oriented_points(cloud.points[a], normals.normals[a], cloud.points[b], normals.normals[b]);
    if (!m || m->radius < config.min_radius || m->radius > config.max_radius) return std::nullopt;
    const double r1 = m->radial(cloud.points[a]).norm();
    const double r2 = m->radial(cloud.points[b]).norm();
    if (std::abs(r1 - r2) > 2.0 * config.inlier_threshold) return std::nullopt;
    return RansacModel(*m);
  }
};

}  // namespace

RansacResult ransac_fit(const PointCloud& cloud, const NormalField& normals, const RansacConfig& config,
                        std::span<const PointId> candidates) {
  config.validate();
  if (normals.size() != cloud.size()) throw Error(Errc::length_mismatch, "normal field does not match cloud");
  const bool cylinder = config.model == RansacModelKind::cylinder;
  const std::size_t sample_size = cylinder ? 2 : 3;

  std::vector<PointId> pool;
  for (const PointId id : candidates) {
    if (id >= cloud.size()) throw Error(Errc::invalid_id, fmt::format("point id {} out of range", id));
    if (!cylinder || normals.valid[id]) pool.push_back(id);
  }
  if (pool.size() < sample_size) {
    throw Error(Errc::insufficient_points,
                fmt::format("{} usable points; a {} needs {}", pool.size(), to_string(config.model), sample_size));
  }

  // Samples are drawn up front so the winner does not depend on the thread count.
  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::vector<PointId> samples(config.max_iterations * sample_size);
  for (std::size_t it = 0; it < config.max_iterations; ++it) {
    PointId* s = samples.data() + it * sample_size;
    for (std::size_t j = 0; j < sample_size; ++j) {
      PointId id;
      do {
        id = pool[pick(rng)];
      } while (std::find(s, s + j, id) != s + j);
      s[j] = id;
    }
  }

  const Evaluator eval{cloud, normals, config, std::cos(config.normal_threshold_deg * std::numbers::pi / 180.0)};
  std::vector<std::size_t> counts(config.max_iterations, 0);
  parallel_for(config.max_iterations, config.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t it = begin; it < end; ++it) {
      const auto model = eval.hypothesis({samples.data() + it * sample_size, sample_size});
      if (!model) continue;
      std::size_t n = 0;
      for (const PointId id : candidates) n += eval.is_inlier(*model, id) ? 1 : 0;
      counts[it] = n;
    }
  });

  const auto best = std::max_element(counts.begin(), counts.end());  // first maximum wins ties
  const auto best_it = static_cast<std::size_t>(best - counts.begin());
  if (*best < std::max<std::size_t>(config.min_inliers, 1)) {
    throw Error(Errc::no_model_found,
                fmt::format("best {} has {} inliers, need {}", to_string(config.model), *best, config.min_inliers));
  }
  RansacResult result;
  result.model = *eval.hypothesis({samples.data() + best_it * sample_size, sample_size});
  result.iteration = best_it;
  for (const PointId id : candidates) {
    if (eval.is_inlier(result.model, id)) result.inliers.push_back(id);
  }
  std::sort(result.inliers.begin(), result.inliers.end());
  return result;
}

RansacResult ransac_fit(const PointCloud& cloud, const NormalField& normals, const RansacConfig& config) {
  std::vector<PointId> all(cloud.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<PointId>(i);
  return ransac_fit(cloud, normals, config, all);
}

std::vector<RansacResult> extract_instances(const PointCloud& cloud, const NormalField& normals,
                                            const RansacConfig& config, std::size_t n_instances) {
  if (n_instances < 1) throw Error(Errc::invalid_argument, "n_instances must be >= 1");
  std::vector<PointId> remaining(cloud.size());
  for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = static_cast<PointId>(i);
  std::vector<RansacResult> out;
  RansacConfig round = config;
  for (std::size_t n = 0; n < n_instances; ++n) {
    round.seed = config.seed + n;
    try {
      out.push_back(ransac_fit(cloud, normals, round, remaining));
    } catch (const Error& e) {
      if (!out.empty() && (e.code() == Errc::no_model_found || e.code() == Errc::insufficient_points)) break;
      throw;
    }
    std::vector<PointId> next;
    std::set_difference(remaining.begin(), remaining.end(), out.back().inliers.begin(), out.back().inliers.end(),
                        std::back_inserter(next));
    remaining = std::move(next);
  }
  return out;
}

LabelMask instances_to_mask(std::size_t n, const std::vector<RansacResult>& instances, Label label, Label other) {
  LabelMask mask(n, other);
  for (const auto& inst : instances) {
    for (const PointId id : inst.inliers) {
      if (id >= n) throw Error(Errc::invalid_id, fmt::format("inlier id {} out of range", id));
      mask[id] = label;
    }
  }
  return mask;
}

}  // namespace shapebp
