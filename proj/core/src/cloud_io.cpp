#include "shapebp/cloud_io.hpp"

#include "shapebp/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace shapebp {

std::optional<Label> label_from_id(int id) noexcept {
  switch (id) {
    case 0: return Label::planar;
    case 1: return Label::curved;
    case 2: return Label::edge;
    case 255: return Label::unlabeled;
    default: return std::nullopt;
  }
}

const char* label_name(Label label) noexcept {
  switch (label) {
    case Label::planar: return "planar";
    case Label::curved: return "curved";
    case Label::edge: return "edge";
    case Label::unlabeled: return "unlabeled";
  }
  return "unknown";
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

[[noreturn]] void parse_fail(const std::filesystem::path& path, std::size_t line_no,
                             const std::string& what) {
  throw Error(Errc::parse_error, path.string() + ":" + std::to_string(line_no) + ": " + what);
}

double parse_double(std::string_view tok, const std::filesystem::path& path, std::size_t line_no) {
  // from_chars rejects "nan"/"inf" spellings on some libstdc++ versions; strtod
  // accepts them, which lets the caller report non-finite values precisely.
  std::string s(tok);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty()) {
    parse_fail(path, line_no, "not a number: '" + s + "'");
  }
  return v;
}

std::size_t parse_count(std::string_view tok, const std::filesystem::path& path, std::size_t line_no) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    parse_fail(path, line_no, "not a count: '" + std::string(tok) + "'");
  }
  return v;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot open '" + path.string() + "' for writing");
  return out;
}

void finish_write(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(Errc::io_error, "write failed for '" + path.string() + "'");
}

// Column layout shared by the PCD and PLY readers.
struct Columns {
  std::size_t total = 0;
  std::optional<std::size_t> x, y, z, nx, ny, nz;

  bool has_xyz() const { return x && y && z; }
  bool has_normals() const { return nx && ny && nz; }
};

void assign_column(Columns& cols, std::string_view name, std::size_t index) {
  if (name == "x") cols.x = index;
  else if (name == "y") cols.y = index;
  else if (name == "z") cols.z = index;
  else if (name == "normal_x" || name == "nx") cols.nx = index;
  else if (name == "normal_y" || name == "ny") cols.ny = index;
  else if (name == "normal_z" || name == "nz") cols.nz = index;
}

class RecordSink {
 public:
  RecordSink(const std::filesystem::path& path, const Columns& cols, const LoadOptions& options)
      : path_(path), cols_(cols), options_(options) {
    if (cols_.has_normals()) cloud_.normals.reserve(64);
  }

  void add(const std::vector<std::string_view>& toks, std::size_t line_no) {
    if (toks.size() != cols_.total) {
      parse_fail(path_, line_no,
                 "expected " + std::to_string(cols_.total) + " values, got " + std::to_string(toks.size()));
    }
    const Vec3 p(parse_double(toks[*cols_.x], path_, line_no), parse_double(toks[*cols_.y], path_, line_no),
                 parse_double(toks[*cols_.z], path_, line_no));
    if (!p.allFinite()) {
      if (options_.drop_non_finite) {
        ++dropped_;
        return;
      }
      throw Error(Errc::non_finite_coordinate,
                  path_.string() + ":" + std::to_string(line_no) + ": non-finite coordinate");
    }
    cloud_.points.push_back(p);
    if (cols_.has_normals()) {
      const Vec3 n(parse_double(toks[*cols_.nx], path_, line_no), parse_double(toks[*cols_.ny], path_, line_no),
                   parse_double(toks[*cols_.nz], path_, line_no));
      const bool ok = n.allFinite() && std::abs(n.norm() - 1.0) <= 1e-4;
      cloud_.normals.push_back(ok ? Vec3(n.normalized()) : Vec3::Zero());
      cloud_.valid.push_back(ok ? 1 : 0);
    }
  }

  std::size_t records() const { return cloud_.points.size() + dropped_; }
  PointCloud take() { return std::move(cloud_); }

 private:
  const std::filesystem::path& path_;
  const Columns& cols_;
  const LoadOptions& options_;
  PointCloud cloud_;
  std::size_t dropped_ = 0;
};

PointCloud load_xyz(const std::filesystem::path& path, const LoadOptions& options) {
  auto in = open_in(path);
  Columns cols;
  cols.total = 3;
  cols.x = 0;
  cols.y = 1;
  cols.z = 2;
  RecordSink sink(path, cols, options);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto toks = split_ws(line);
    if (toks.empty() || toks.front().starts_with('#')) continue;
    sink.add(toks, line_no);
  }
  return sink.take();
}

PointCloud load_pcd(const std::filesystem::path& path, const LoadOptions& options) {
  auto in = open_in(path);
  Columns cols;
  std::optional<std::size_t> declared_points;
  std::vector<std::size_t> counts;
  std::vector<std::string> fields;
  std::string line;
  std::size_t line_no = 0;
  bool data_seen = false;

  while (!data_seen && std::getline(in, line)) {
    ++line_no;
    const auto toks = split_ws(line);
    if (toks.empty() || toks.front().starts_with('#')) continue;
    const std::string key = lowercase(toks.front());
    if (key == "fields") {
      for (std::size_t i = 1; i < toks.size(); ++i) fields.emplace_back(toks[i]);
    } else if (key == "count") {
      for (std::size_t i = 1; i < toks.size(); ++i) counts.push_back(parse_count(toks[i], path, line_no));
    } else if (key == "points") {
      if (toks.size() != 2) parse_fail(path, line_no, "malformed POINTS line");
      declared_points = parse_count(toks[1], path, line_no);
    } else if (key == "data") {
      if (toks.size() != 2) parse_fail(path, line_no, "malformed DATA line");
      if (lowercase(toks[1]) != "ascii") {
        throw Error(Errc::unsupported_format,
                    path.string() + ": only ASCII PCD is supported (DATA " + std::string(toks[1]) + ")");
      }
      data_seen = true;
    } else if (key == "version" || key == "size" || key == "type" || key == "width" || key == "height" ||
               key == "viewpoint") {
      // Not needed for unorganized ASCII data.
    } else {
      parse_fail(path, line_no, "unknown PCD header key '" + std::string(toks.front()) + "'");
    }
  }
  if (!data_seen) parse_fail(path, line_no, "missing DATA line");
  if (fields.empty()) parse_fail(path, line_no, "missing FIELDS line");
  if (!declared_points) parse_fail(path, line_no, "missing POINTS line");
  if (!counts.empty() && counts.size() != fields.size()) {
    parse_fail(path, line_no, "COUNT and FIELDS disagree");
  }
  for (std::size_t i = 0; i < fields.size(); ++i) {
    assign_column(cols, fields[i], cols.total);
    cols.total += counts.empty() ? 1 : counts[i];
  }
  if (!cols.has_xyz()) parse_fail(path, line_no, "FIELDS must include x y z");

  RecordSink sink(path, cols, options);
  while (std::getline(in, line)) {
    ++line_no;
    const auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (sink.records() == *declared_points) {
      parse_fail(path, line_no, "more records than POINTS " + std::to_string(*declared_points));
    }
    sink.add(toks, line_no);
  }
  if (sink.records() != *declared_points) {
    parse_fail(path, line_no,
               "POINTS declares " + std::to_string(*declared_points) + " records, found " +
                   std::to_string(sink.records()));
  }
  return sink.take();
}

PointCloud load_ply(const std::filesystem::path& path, const LoadOptions& options) {
  auto in = open_in(path);
  std::string line;
  std::size_t line_no = 0;

  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    return true;
  };

  if (!next_line() || lowercase(line.substr(0, line.find_last_not_of(" \t\r") + 1)) != "ply") {
    parse_fail(path, 1, "missing 'ply' magic");
  }

  struct Element {
    std::string name;
    std::size_t count = 0;
    Columns cols;
  };
  std::vector<Element> elements;
  bool header_done = false;
  bool format_seen = false;
  while (!header_done && next_line()) {
    const auto toks = split_ws(line);
    if (toks.empty()) continue;
    const std::string key = lowercase(toks.front());
    if (key == "format") {
      if (toks.size() < 2 || lowercase(toks[1]) != "ascii") {
        throw Error(Errc::unsupported_format, path.string() + ": only ASCII PLY is supported");
      }
      format_seen = true;
    } else if (key == "comment" || key == "obj_info") {
    } else if (key == "element") {
      if (toks.size() != 3) parse_fail(path, line_no, "malformed element line");
      elements.push_back({std::string(toks[1]), parse_count(toks[2], path, line_no), {}});
    } else if (key == "property") {
      if (elements.empty()) parse_fail(path, line_no, "property before element");
      auto& cols = elements.back().cols;
      if (toks.size() >= 2 && lowercase(toks[1]) == "list") {
        if (elements.back().name == "vertex") parse_fail(path, line_no, "list properties on vertex unsupported");
        cols.total = 0;  // variable width; lines are skipped whole
      } else {
        if (toks.size() != 3) parse_fail(path, line_no, "malformed property line");
        assign_column(cols, toks[2], cols.total);
        ++cols.total;
      }
    } else if (key == "end_header") {
      header_done = true;
    } else {
      parse_fail(path, line_no, "unknown PLY header key '" + std::string(toks.front()) + "'");
    }
  }
  if (!header_done) parse_fail(path, line_no, "missing end_header");
  if (!format_seen) parse_fail(path, line_no, "missing format line");

  const auto vertex = std::find_if(elements.begin(), elements.end(),
                                   [](const Element& e) { return e.name == "vertex"; });
  if (vertex == elements.end()) parse_fail(path, line_no, "no vertex element");
  if (!vertex->cols.has_xyz()) parse_fail(path, line_no, "vertex element lacks x y z");

  std::optional<RecordSink> sink;
  for (auto it = elements.begin(); it != elements.end(); ++it) {
    const bool is_vertex = it == vertex;
    if (is_vertex) sink.emplace(path, vertex->cols, options);
    for (std::size_t i = 0; i < it->count; ++i) {
      if (!next_line()) {
        parse_fail(path, line_no, "element '" + it->name + "' declares " + std::to_string(it->count) +
                                      " records, file ended after " + std::to_string(i));
      }
      if (is_vertex) sink->add(split_ws(line), line_no);
    }
    if (is_vertex) break;
  }
  return sink->take();
}

void require_saveable(const PointCloud& cloud) {
  if (cloud.empty()) throw Error(Errc::empty_cloud, "cannot save an empty cloud");
  if (cloud.has_normals() && (cloud.normals.size() != cloud.size() || cloud.valid.size() != cloud.size())) {
    throw Error(Errc::invariant_violation, "normals/valid length differs from point count");
  }
  for (const auto& p : cloud.points) {
    if (!p.allFinite()) throw Error(Errc::non_finite_coordinate, "cloud contains non-finite coordinates");
  }
}

void write_coord(std::ostream& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  out << buf;
}

void write_record(std::ostream& out, const PointCloud& cloud, std::size_t i) {
  const auto& p = cloud.points[i];
  write_coord(out, p.x());
  out << ' ';
  write_coord(out, p.y());
  out << ' ';
  write_coord(out, p.z());
  if (cloud.has_normals()) {
    if (cloud.valid[i]) {
      const auto& n = cloud.normals[i];
      out << ' ';
      write_coord(out, n.x());
      out << ' ';
      write_coord(out, n.y());
      out << ' ';
      write_coord(out, n.z());
    } else {
      out << " nan nan nan";
    }
  }
}

}  // namespace

std::optional<CloudFormat> parse_cloud_format(std::string_view name) noexcept {
  if (name == "pcd" || name == "pcd-ascii") return CloudFormat::pcd_ascii;
  if (name == "ply" || name == "ply-ascii") return CloudFormat::ply_ascii;
  if (name == "xyz") return CloudFormat::xyz;
  return std::nullopt;
}

std::optional<CloudFormat> format_from_extension(const std::filesystem::path& path) noexcept {
  const std::string ext = lowercase(path.extension().string());
  if (ext == ".pcd") return CloudFormat::pcd_ascii;
  if (ext == ".ply") return CloudFormat::ply_ascii;
  if (ext == ".xyz" || ext == ".txt") return CloudFormat::xyz;
  return std::nullopt;
}

std::string_view to_string(CloudFormat format) noexcept {
  switch (format) {
    case CloudFormat::pcd_ascii: return "pcd-ascii";
    case CloudFormat::ply_ascii: return "ply-ascii";
    case CloudFormat::xyz: return "xyz";
  }
  return "unknown";
}

PointCloud load_cloud(const std::filesystem::path& path, CloudFormat format, const LoadOptions& options) {
  switch (format) {
    case CloudFormat::pcd_ascii: return load_pcd(path, options);
    case CloudFormat::ply_ascii: return load_ply(path, options);
    case CloudFormat::xyz: return load_xyz(path, options);
  }
  throw Error(Errc::unsupported_format, "unknown cloud format");
}

PointCloud load_cloud(const std::filesystem::path& path) {
  const auto format = format_from_extension(path);
  if (!format) {
    throw Error(Errc::unsupported_format, "cannot infer cloud format from '" + path.string() + "'");
  }
  return load_cloud(path, *format);
}

void save_cloud(const PointCloud& cloud, const std::filesystem::path& path, CloudFormat format) {
  require_saveable(cloud);
  if (format == CloudFormat::xyz && cloud.has_normals()) {
    throw Error(Errc::unsupported_fields, "xyz format cannot store normals");
  }
  auto out = open_out(path);
  const std::size_t n = cloud.size();
  if (format == CloudFormat::pcd_ascii) {
    const bool normals = cloud.has_normals();
    out << "# .PCD v0.7 - Point Cloud Data file format\n"
        << "VERSION 0.7\n"
        << "FIELDS x y z" << (normals ? " normal_x normal_y normal_z" : "") << '\n'
        << "SIZE 8 8 8" << (normals ? " 8 8 8" : "") << '\n'
        << "TYPE F F F" << (normals ? " F F F" : "") << '\n'
        << "COUNT 1 1 1" << (normals ? " 1 1 1" : "") << '\n'
        << "WIDTH " << n << '\n'
        << "HEIGHT 1\n"
        << "VIEWPOINT 0 0 0 1 0 0 0\n"
        << "POINTS " << n << '\n'
        << "DATA ascii\n";
  } else if (format == CloudFormat::ply_ascii) {
    out << "ply\nformat ascii 1.0\nelement vertex " << n << '\n'
        << "property double x\nproperty double y\nproperty double z\n";
    if (cloud.has_normals()) out << "property double nx\nproperty double ny\nproperty double nz\n";
    out << "end_header\n";
  }
  for (std::size_t i = 0; i < n; ++i) {
    write_record(out, cloud, i);
    out << '\n';
  }
  finish_write(out, path);
}

LabelMask load_labels(const std::filesystem::path& path) {
  auto in = open_in(path);
  LabelMask mask;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks.size() != 1) parse_fail(path, line_no, "expected one integer per line");
    int id = 0;
    const auto tok = toks.front();
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), id);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
      parse_fail(path, line_no, "not an integer: '" + std::string(tok) + "'");
    }
    const auto label = label_from_id(id);
    if (!label) {
      throw Error(Errc::unknown_class_id,
                  path.string() + ":" + std::to_string(line_no) + ": class id " + std::to_string(id));
    }
    mask.push_back(*label);
  }
  return mask;
}

void save_labels(const LabelMask& labels, const std::filesystem::path& path) {
  auto out = open_out(path);
  for (const Label l : labels) out << static_cast<int>(l) << '\n';
  finish_write(out, path);
}

void check_pairing(const PointCloud& cloud, const LabelMask& labels) {
  if (cloud.size() != labels.size()) {
    throw Error(Errc::length_mismatch, "cloud has " + std::to_string(cloud.size()) + " points but label mask has " +
                                           std::to_string(labels.size()) + " entries");
  }
}

void save_colored_ply(const PointCloud& cloud, std::span<const Rgb> colors, const std::filesystem::path& path) {
  if (cloud.empty()) throw Error(Errc::empty_cloud, "cannot save an empty cloud");
  if (colors.size() != cloud.size()) throw Error(Errc::length_mismatch, "one color per point required");
  auto out = open_out(path);
  out << "ply\nformat ascii 1.0\nelement vertex " << cloud.size() << '\n'
      << "property double x\nproperty double y\nproperty double z\n"
      << "property uchar red\nproperty uchar green\nproperty uchar blue\nend_header\n";
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto& p = cloud.points[i];
    write_coord(out, p.x());
    out << ' ';
    write_coord(out, p.y());
    out << ' ';
    write_coord(out, p.z());
    out << ' ' << int{colors[i][0]} << ' ' << int{colors[i][1]} << ' ' << int{colors[i][2]} << '\n';
  }
  finish_write(out, path);
}

Rgb likelihood_color(double score) noexcept {
  const double s = std::clamp(score, 0.0, 1.0);
  const auto g = static_cast<std::uint8_t>(std::lround(255.0 * s));
  const auto b = static_cast<std::uint8_t>(std::lround(255.0 * (1.0 - s)));
  return {0, g, b};
}

Rgb label_color(Label label) noexcept {
  switch (label) {
    case Label::planar: return {0, 200, 0};
    case Label::curved: return {40, 90, 255};
    case Label::edge: return {230, 30, 30};
    case Label::unlabeled: return {128, 128, 128};
  }
  return {0, 0, 0};
}

}  // namespace shapebp
