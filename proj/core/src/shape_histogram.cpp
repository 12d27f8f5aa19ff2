#include "shapebp/shape_histogram.hpp"

#include "shapebp/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace shapebp {

using nlohmann::json;

void HistogramParams::validate() const {
  if (bins_mu < 1 || bins_sigma < 1) throw Error(Errc::invalid_argument, "bin counts must be >= 1");
  if (!(mu_max > 0.0) || !(sigma_max > 0.0)) throw Error(Errc::invalid_argument, "axis ranges must be > 0");
}

std::size_t bin_id(double value, double range_max, std::size_t k) {
  if (!(value >= 0.0)) throw Error(Errc::negative_value, "cannot bin a negative or NaN value");
  if (k < 1 || !(range_max > 0.0)) throw Error(Errc::invalid_argument, "bin_id needs k >= 1 and range_max > 0");
  const double scaled = std::floor(value * static_cast<double>(k) / range_max);
  if (scaled >= static_cast<double>(k - 1)) return k - 1;
  return static_cast<std::size_t>(scaled);
}

std::uint64_t BinCounts::total() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

BinCounts count_bins(const InadField& field, const HistogramParams& params) {
  params.validate();
  BinCounts out{params, std::vector<std::uint64_t>(params.bins_mu * params.bins_sigma, 0)};
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (!field.valid[i]) continue;
    const auto& p = field.pairs[i];
    ++out.counts[bin_id(p.mu, params.mu_max, params.bins_mu) * params.bins_sigma +
                 bin_id(p.sigma, params.sigma_max, params.bins_sigma)];
  }
  return out;
}

ShapeHistogram normalize(const BinCounts& counts, double source_r) {
  const std::uint64_t total = counts.total();
  if (total == 0) throw Error(Errc::no_valid_points, "histogram has no samples");
  const std::uint64_t peak = *std::max_element(counts.counts.begin(), counts.counts.end());
  ShapeHistogram h;
  h.params = counts.params;
  h.sample_count = total;
  h.source_r = source_r;
  h.bins.resize(counts.counts.size());
  const double inv = 1.0 / static_cast<double>(peak);
  for (std::size_t i = 0; i < counts.counts.size(); ++i) {
    // The peak bin divides to exactly 1; others are c/peak rounded.
    h.bins[i] = counts.counts[i] == peak ? 1.0 : static_cast<double>(counts.counts[i]) * inv;
  }
  return h;
}

ShapeHistogram build_histogram(const InadField& field, const HistogramParams& params) {
  if (field.valid_count() == 0) throw Error(Errc::no_valid_points, "INAD field has no valid points");
  return normalize(count_bins(field, params), field.radius);
}

double ShapeHistogram::lookup(const InadPair& pair) const {
  return at(bin_id(pair.mu, params.mu_max, params.bins_mu), bin_id(pair.sigma, params.sigma_max, params.bins_sigma));
}

void ShapeHistogram::validate() const {
  params.validate();
  if (bins.size() != params.bins_mu * params.bins_sigma) {
    throw Error(Errc::invariant_violation, "bin grid size does not match k_mu x k_sigma");
  }
  double peak = 0.0;
  for (const double b : bins) {
    if (!(b >= 0.0 && b <= 1.0)) throw Error(Errc::invariant_violation, "bin value outside [0, 1]");
    peak = std::max(peak, b);
  }
  if (sample_count > 0 && peak != 1.0) {
    throw Error(Errc::invariant_violation, "non-empty histogram is not max-normalized");
  }
}

LikelihoodField back_project(const ShapeHistogram& histogram, const InadField& field) {
  LikelihoodField out;
  out.scores.assign(field.size(), 0.0);
  out.valid = field.valid;
  out.radius = field.radius;
  out.source_r = histogram.source_r;
  out.radius_mismatch = field.radius != histogram.source_r;
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field.valid[i]) out.scores[i] = histogram.lookup(field.pairs[i]);
  }
  return out;
}

std::string serialize(const ShapeHistogram& h) {
  json doc;
  doc["format"] = "shape-histogram";
  doc["version"] = ShapeHistogram::kVersion;
  doc["k_mu"] = h.params.bins_mu;
  doc["k_sigma"] = h.params.bins_sigma;
  doc["mu_range"] = {0.0, h.params.mu_max};
  doc["sigma_range"] = {0.0, h.params.sigma_max};
  doc["source_r"] = h.source_r;
  doc["sample_count"] = h.sample_count;
  doc["bins"] = h.bins;
  return doc.dump(2) + "\n";
}

namespace {

const json& require(const json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end()) throw Error(Errc::schema_mismatch, std::string("missing field '") + key + "'");
  return *it;
}

double range_max(const json& doc, const char* key) {
  const json& r = require(doc, key);
  if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number()) {
    throw Error(Errc::schema_mismatch, std::string("'") + key + "' must be [0, max]");
  }
  if (r[0].get<double>() != 0.0) throw Error(Errc::schema_mismatch, std::string("'") + key + "' must start at 0");
  return r[1].get<double>();
}

}  // namespace

ShapeHistogram deserialize(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::parse_error, e.what());
  }
  if (!doc.is_object()) throw Error(Errc::schema_mismatch, "histogram document must be an object");
  try {
    const json& version = require(doc, "version");
    if (!version.is_number_integer() || version.get<int>() != ShapeHistogram::kVersion) {
      throw Error(Errc::schema_mismatch, "unsupported histogram version " + version.dump());
    }
    if (const auto f = doc.find("format"); f != doc.end() && *f != "shape-histogram") {
      throw Error(Errc::schema_mismatch, "not a shape-histogram document");
    }
    ShapeHistogram h;
    const json& k_mu = require(doc, "k_mu");
    const json& k_sigma = require(doc, "k_sigma");
    if (!k_mu.is_number_unsigned() || !k_sigma.is_number_unsigned()) {
      throw Error(Errc::schema_mismatch, "k_mu and k_sigma must be non-negative integers");
    }
    h.params.bins_mu = k_mu.get<std::size_t>();
    h.params.bins_sigma = k_sigma.get<std::size_t>();
    h.params.mu_max = range_max(doc, "mu_range");
    h.params.sigma_max = range_max(doc, "sigma_range");
    const json& source_r = require(doc, "source_r");
    const json& samples = require(doc, "sample_count");
    const json& bins = require(doc, "bins");
    if (!source_r.is_number() || !samples.is_number_unsigned() || !bins.is_array()) {
      throw Error(Errc::schema_mismatch, "source_r, sample_count or bins has the wrong type");
    }
    h.source_r = source_r.get<double>();
    h.sample_count = samples.get<std::uint64_t>();
    if (h.params.bins_mu < 1 || h.params.bins_sigma < 1 || bins.size() != h.params.bins_mu * h.params.bins_sigma) {
      throw Error(Errc::schema_mismatch, "bins must hold k_mu * k_sigma values");
    }
    h.bins.reserve(bins.size());
    for (const auto& b : bins) {
      if (!b.is_number()) throw Error(Errc::schema_mismatch, "bin values must be numbers");
      h.bins.push_back(b.get<double>());
    }
    h.validate();
    return h;
  } catch (const json::exception& e) {
    throw Error(Errc::schema_mismatch, e.what());
  }
}

void save_histogram(const ShapeHistogram& histogram, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot open '" + path.string() + "' for writing");
  out << serialize(histogram);
  if (!out) throw Error(Errc::io_error, "write failed for '" + path.string() + "'");
}

ShapeHistogram load_histogram(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize(buf.str());
}

void write_likelihood_csv(const LikelihoodField& field, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot open '" + path.string() + "' for writing");
  out << "point_id,score,valid\n";
  char buf[64];
  for (std::size_t i = 0; i < field.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.6f,%d\n", i, field.scores[i], field.valid[i] ? 1 : 0);
    out << buf;
  }
  if (!out) throw Error(Errc::io_error, "write failed for '" + path.string() + "'");
}

}  // namespace shapebp
