#include "shapebp/inad.hpp"

#include "shapebp/error.hpp"
#include "shapebp/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

namespace shapebp {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kSigmaFloor = 1e-9;

struct Moments {
  double mean;
  double stddev;
};

Moments moments(std::span<const double> values) {
  double sum = 0.0;
  for (const double v : values) sum += v;
  const double n = static_cast<double>(values.size());
  const double mean = sum / n;
  double sq = 0.0;
  for (const double v : values) sq += (v - mean) * (v - mean);
  return {mean, std::sqrt(sq / n)};
}

void validate_rate(double c) {
  if (!(c > 0.0)) throw Error(Errc::invalid_argument, "outlier rate must be > 0");
}

}  // namespace

std::size_t InadField::valid_count() const noexcept {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), std::uint8_t{1}));
}

double fold_angle(double degrees) noexcept { return std::min(degrees, 180.0 - degrees); }

void inter_normal_angles(const NormalField& normals, PointId center, std::span<const PointId> neighbors,
                         std::vector<double>& out) {
  if (center >= normals.size() || !normals.valid[center]) {
    throw Error(Errc::invalid_center_normal, "point " + std::to_string(center) + " has no valid normal");
  }
  out.clear();
  const Vec3& nc = normals.normals[center];
  for (const PointId j : neighbors) {
    if (!normals.valid[j]) continue;
    const double dot = std::clamp(nc.dot(normals.normals[j]), -1.0, 1.0);
    out.push_back(fold_angle(std::acos(dot) * kRadToDeg));
  }
}

std::vector<double> inter_normal_angles(const NormalField& normals, PointId center,
                                        std::span<const PointId> neighbors) {
  std::vector<double> out;
  inter_normal_angles(normals, center, neighbors, out);
  return out;
}

void reject_outliers_in_place(std::vector<double>& alphas, double outlier_rate) {
  if (alphas.empty()) throw Error(Errc::empty_input, "no angles to filter");
  validate_rate(outlier_rate);
  const auto [mu, sigma] = moments(alphas);
  if (sigma < kSigmaFloor) return;

  std::size_t closest = 0;
  double closest_dev = std::abs(alphas[0] - mu);
  std::size_t kept = 0;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const double dev = std::abs(alphas[i] - mu);
    if (dev < closest_dev) {
      closest_dev = dev;
      closest = i;
    }
    if (dev / sigma <= outlier_rate) alphas[kept++] = alphas[i];
  }
  if (kept == 0) {
    // Possible only for c < 1. `closest` indexes the untouched input.
    const double keep = alphas[closest];
    alphas.assign(1, keep);
    return;
  }
  alphas.resize(kept);
}

std::vector<double> reject_outliers(std::span<const double> alphas, double outlier_rate) {
  std::vector<double> out(alphas.begin(), alphas.end());
  reject_outliers_in_place(out, outlier_rate);
  return out;
}

InadPair inad_pair(std::span<const double> alphas) {
  if (alphas.empty()) throw Error(Errc::empty_input, "INAD of an empty angle list");
  const auto [mu, sigma] = moments(alphas);
  return {mu, sigma, static_cast<std::uint32_t>(alphas.size())};
}

bool inad_at(const NormalField& normals, PointId center, std::span<const PointId> neighbors,
             double outlier_rate, std::vector<double>& scratch, InadPair& out) {
  if (!normals.valid[center]) return false;
  inter_normal_angles(normals, center, neighbors, scratch);
  if (scratch.empty()) return false;
  reject_outliers_in_place(scratch, outlier_rate);
  out = inad_pair(scratch);
  return true;
}

InadField compute_inad_field(const PointCloud& cloud, const NormalField& normals, const KdTree& index,
                             const InadParams& params) {
  if (cloud.empty()) throw Error(Errc::empty_cloud, "INAD on an empty cloud");
  if (!(params.radius > 0.0)) throw Error(Errc::non_positive_radius, "INAD radius must be > 0");
  validate_rate(params.outlier_rate);
  if (normals.size() != cloud.size() || index.size() != cloud.size()) {
    throw Error(Errc::length_mismatch, "normals/index do not belong to this cloud");
  }

  InadField field;
  field.pairs.assign(cloud.size(), InadPair{});
  field.valid.assign(cloud.size(), 0);
  field.radius = params.radius;
  field.outlier_rate = params.outlier_rate;

  parallel_for(cloud.size(), params.threads, [&](std::size_t begin, std::size_t end) {
    std::vector<PointId> neighbors;
    std::vector<double> scratch;
    for (std::size_t i = begin; i < end; ++i) {
      const auto id = static_cast<PointId>(i);
      if (!normals.valid[i]) continue;
      index.radius_neighbors(id, params.radius, neighbors);
      if (inad_at(normals, id, neighbors, params.outlier_rate, scratch, field.pairs[i])) field.valid[i] = 1;
    }
  });
  return field;
}

void write_inad_csv(const InadField& field, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot open '" + path.string() + "' for writing");
  out << "point_id,mu,sigma,valid\n";
  char buf[96];
  for (std::size_t i = 0; i < field.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.6f,%.6f,%d\n", i, field.pairs[i].mu, field.pairs[i].sigma,
                  field.valid[i] ? 1 : 0);
    out << buf;
  }
  if (!out) throw Error(Errc::io_error, "write failed for '" + path.string() + "'");
}

}  // namespace shapebp
