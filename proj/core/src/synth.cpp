#include "shapebp/synth.hpp"

#include "shapebp/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace shapebp {

using nlohmann::json;

namespace {

constexpr std::size_t kCreaseBand = 2;  // in samples

class NoiseSource {
 public:
  NoiseSource(double sigma, std::uint64_t seed) : sigma_(sigma), rng_(seed) {}
  double draw() { return sigma_ > 0.0 ? sigma_ * unit_(rng_) : 0.0; }

 private:
  double sigma_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> unit_{0.0, 1.0};
};

void push(SyntheticCloud& out, const Vec3& p, const Vec3& n, Label label, NoiseSource& noise) {
  out.cloud.points.push_back(p + noise.draw() * n);
  out.true_normals.push_back(n);
  out.labels.push_back(label);
}

std::size_t steps(double length, double res) { return static_cast<std::size_t>(std::llround(length / res)); }

void check_res(double res) {
  if (!(res > 0.0)) throw Error(Errc::bad_spec, "resolution must be > 0");
}

void check_noise(double noise_sigma) {
  if (!(noise_sigma >= 0.0)) throw Error(Errc::bad_spec, "noise_sigma must be >= 0");
}

void append_plane(SyntheticCloud& out, const PlanePrimitive& plane, const std::vector<CylinderPrimitive>& holes,
                  NoiseSource& noise) {
  const std::size_t nx = steps(plane.extent_x, plane.resolution) + 1;
  const std::size_t ny = steps(plane.extent_y, plane.resolution) + 1;
  const double x0 = plane.center.x() - 0.5 * static_cast<double>(nx - 1) * plane.resolution;
  const double y0 = plane.center.y() - 0.5 * static_cast<double>(ny - 1) * plane.resolution;
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const Vec3 p(x0 + static_cast<double>(i) * plane.resolution, y0 + static_cast<double>(j) * plane.resolution,
                   plane.center.z());
      const bool occluded = std::any_of(holes.begin(), holes.end(), [&](const CylinderPrimitive& c) {
        const double dx = p.x() - c.base.x();
        const double dy = p.y() - c.base.y();
        return std::abs(c.base.z() - plane.center.z()) < 1e-12 && dx * dx + dy * dy < c.radius * c.radius;
      });
      if (!occluded) push(out, p, Vec3::UnitZ(), Label::planar, noise);
    }
  }
}

void append_cylinder(SyntheticCloud& out, const CylinderPrimitive& cyl, NoiseSource& noise) {
  const auto around = std::max<std::size_t>(3, steps(2.0 * std::numbers::pi * cyl.radius, cyl.resolution));
  const std::size_t rings = steps(cyl.height, cyl.resolution) + 1;
  for (std::size_t k = 0; k < rings; ++k) {
    const double z = cyl.base.z() + static_cast<double>(k) * cyl.resolution;
    for (std::size_t a = 0; a < around; ++a) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(a) / static_cast<double>(around);
      const Vec3 n(std::cos(theta), std::sin(theta), 0.0);
      push(out, Vec3(cyl.base.x(), cyl.base.y(), z) + cyl.radius * n, n, Label::curved, noise);
    }
  }
}

void append_box(SyntheticCloud& out, const BoxPrimitive& box, NoiseSource& noise) {
  const std::size_t n = steps(box.edge_length, box.resolution) + 1;
  const double res = box.resolution;
  auto label = [](std::size_t a, std::size_t b) { return std::min(a, b) <= kCreaseBand ? Label::edge : Label::planar; };
  auto coord = [res](std::size_t i) { return static_cast<double>(i) * res; };
  // z = 0 face owns both of its creases; y = 0 skips the x-axis row; x = 0
  // skips the rows shared with the other two faces.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) push(out, Vec3(coord(i), coord(j), 0.0), Vec3::UnitZ(), label(i, j), noise);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 1; k < n; ++k) push(out, Vec3(coord(i), 0.0, coord(k)), Vec3::UnitY(), label(i, k), noise);
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t k = 1; k < n; ++k) push(out, Vec3(0.0, coord(j), coord(k)), Vec3::UnitX(), label(j, k), noise);
}

Vec3 default_viewpoint(const Primitive& p) {
  if (const auto* plane = std::get_if<PlanePrimitive>(&p)) return plane->center + Vec3(0.0, 0.0, 1.0);
  if (const auto* cyl = std::get_if<CylinderPrimitive>(&p)) return cyl->base + Vec3(0.0, 0.0, 0.5 * cyl->height);
  const auto& box = std::get<BoxPrimitive>(p);
  return Vec3::Constant(box.edge_length);
}

}  // namespace

void SceneSpec::validate() const {
  if (primitives.empty()) throw Error(Errc::bad_spec, "scene has no primitives");
  check_noise(noise_sigma);
  for (const auto& prim : primitives) {
    std::visit(
        [](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          check_res(p.resolution);
          if constexpr (std::is_same_v<T, PlanePrimitive>) {
            if (!(p.extent_x > 0.0 && p.extent_y > 0.0)) throw Error(Errc::bad_spec, "plane extent must be > 0");
            if (steps(p.extent_x, p.resolution) < 1 || steps(p.extent_y, p.resolution) < 1) {
              throw Error(Errc::bad_spec, "plane needs at least 2 samples per side");
            }
          } else if constexpr (std::is_same_v<T, CylinderPrimitive>) {
            if (!(p.radius > 0.0) || !(p.height >= 0.0)) throw Error(Errc::bad_spec, "cylinder radius must be > 0");
            if (!(p.resolution < p.radius)) throw Error(Errc::bad_spec, "cylinder resolution must be < radius");
          } else {
            if (!(p.edge_length > 0.0)) throw Error(Errc::bad_spec, "box edge length must be > 0");
            if (!(p.resolution < p.edge_length / 10.0)) {
              throw Error(Errc::bad_spec, "box resolution must be < edge_length / 10");
            }
          }
        },
        prim);
  }
}

SyntheticCloud gen_plane(std::size_t nx, std::size_t ny, double res, double noise_sigma, std::uint64_t seed) {
  if (nx < 2 || ny < 2) throw Error(Errc::bad_spec, "plane needs nx, ny >= 2");
  check_res(res);
  check_noise(noise_sigma);
  NoiseSource noise(noise_sigma, seed);
  SyntheticCloud out;
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      push(out, Vec3(static_cast<double>(i) * res, static_cast<double>(j) * res, 0.0), Vec3::UnitZ(), Label::planar,
           noise);
    }
  }
  out.viewpoint = Vec3(0.5 * static_cast<double>(nx - 1) * res, 0.5 * static_cast<double>(ny - 1) * res, 1.0);
  return out;
}

SyntheticCloud gen_cylinder(double radius, double height, double res, double noise_sigma, std::uint64_t seed) {
  CylinderPrimitive cyl{radius, height, res, Vec3::Zero()};
  SceneSpec spec{{cyl}, noise_sigma, seed, std::nullopt};
  spec.validate();
  return generate(spec);
}

SyntheticCloud gen_box_scene(double edge_length, double res, double noise_sigma, std::uint64_t seed) {
  SceneSpec spec{{BoxPrimitive{edge_length, res}}, noise_sigma, seed, std::nullopt};
  spec.validate();
  return generate(spec);
}

SyntheticCloud generate(const SceneSpec& spec) {
  spec.validate();
  std::vector<CylinderPrimitive> cylinders;
  for (const auto& p : spec.primitives) {
    if (const auto* c = std::get_if<CylinderPrimitive>(&p)) cylinders.push_back(*c);
  }
  NoiseSource noise(spec.noise_sigma, spec.seed);
  SyntheticCloud out;
  for (const auto& prim : spec.primitives) {
    if (const auto* plane = std::get_if<PlanePrimitive>(&prim)) append_plane(out, *plane, cylinders, noise);
    else if (const auto* cyl = std::get_if<CylinderPrimitive>(&prim)) append_cylinder(out, *cyl, noise);
    else append_box(out, std::get<BoxPrimitive>(prim), noise);
  }
  if (spec.viewpoint) {
    out.viewpoint = *spec.viewpoint;
  } else if (spec.primitives.size() == 1) {
    out.viewpoint = default_viewpoint(spec.primitives.front());
  } else {
    Vec3 lo = out.cloud.points.front(), hi = lo;
    for (const auto& p : out.cloud.points) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    out.viewpoint = Vec3(0.5 * (lo.x() + hi.x()), 0.5 * (lo.y() + hi.y()), hi.z() + 1.0);
  }
  return out;
}

SceneSpec tabletop_scene(double plane_extent, double res, const std::vector<CylinderPrimitive>& cylinders,
                         double noise_sigma, std::uint64_t seed) {
  SceneSpec spec;
  spec.primitives.push_back(PlanePrimitive{plane_extent, plane_extent, res, Vec3::Zero()});
  for (auto c : cylinders) {
    c.resolution = res;
    spec.primitives.push_back(c);
  }
  spec.noise_sigma = noise_sigma;
  spec.seed = seed;
  return spec;
}

namespace {

double number(const json& obj, const char* key, std::optional<double> fallback = std::nullopt) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    if (fallback) return *fallback;
    throw Error(Errc::bad_spec, std::string("missing '") + key + "'");
  }
  if (!it->is_number()) throw Error(Errc::bad_spec, std::string("'") + key + "' must be a number");
  return it->get<double>();
}

Vec3 vec(const json& obj, const char* key, std::size_t min_len, Vec3 fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_array() || it->size() < min_len || it->size() > 3) {
    throw Error(Errc::bad_spec, std::string("'") + key + "' must be an array of 2 or 3 numbers");
  }
  Vec3 v = fallback;
  for (std::size_t i = 0; i < it->size(); ++i) {
    if (!(*it)[i].is_number()) throw Error(Errc::bad_spec, std::string("'") + key + "' must hold numbers");
    v[static_cast<int>(i)] = (*it)[i].get<double>();
  }
  return v;
}

}  // namespace

SceneSpec parse_scene_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::bad_spec, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(Errc::bad_spec, "scene spec must be a JSON object");
  SceneSpec spec;
  spec.noise_sigma = number(doc, "noise_sigma", 0.0);
  if (const auto it = doc.find("seed"); it != doc.end()) {
    if (!it->is_number_unsigned()) throw Error(Errc::bad_spec, "'seed' must be a non-negative integer");
    spec.seed = it->get<std::uint64_t>();
  }
  if (doc.contains("viewpoint")) spec.viewpoint = vec(doc, "viewpoint", 3, Vec3::Zero());
  const auto prims = doc.find("primitives");
  if (prims == doc.end() || !prims->is_array()) throw Error(Errc::bad_spec, "'primitives' must be an array");
  for (const auto& p : *prims) {
    if (!p.is_object() || !p.contains("type") || !p["type"].is_string()) {
      throw Error(Errc::bad_spec, "each primitive needs a string 'type'");
    }
    const auto type = p["type"].get<std::string>();
    if (type == "plane") {
      PlanePrimitive plane;
      const Vec3 extent = vec(p, "extent", 2, Vec3::Zero());
      if (!p.contains("extent")) throw Error(Errc::bad_spec, "plane needs 'extent'");
      plane.extent_x = extent.x();
      plane.extent_y = extent.y();
      plane.resolution = number(p, "resolution");
      plane.center = vec(p, "center", 2, Vec3::Zero());
      spec.primitives.push_back(plane);
    } else if (type == "cylinder") {
      CylinderPrimitive cyl;
      cyl.radius = number(p, "radius");
      cyl.height = number(p, "height");
      cyl.resolution = number(p, "resolution");
      cyl.base = vec(p, "base", 2, Vec3::Zero());
      spec.primitives.push_back(cyl);
    } else if (type == "box") {
      spec.primitives.push_back(BoxPrimitive{number(p, "edge_length"), number(p, "resolution")});
    } else {
      throw Error(Errc::bad_spec, "unknown primitive type '" + type + "'");
    }
  }
  spec.validate();
  return spec;
}

std::string scene_spec_to_json(const SceneSpec& spec) {
  json doc;
  doc["seed"] = spec.seed;
  doc["noise_sigma"] = spec.noise_sigma;
  if (spec.viewpoint) doc["viewpoint"] = {spec.viewpoint->x(), spec.viewpoint->y(), spec.viewpoint->z()};
  json prims = json::array();
  for (const auto& prim : spec.primitives) {
    if (const auto* p = std::get_if<PlanePrimitive>(&prim)) {
      prims.push_back({{"type", "plane"},
                       {"extent", {p->extent_x, p->extent_y}},
                       {"resolution", p->resolution},
                       {"center", {p->center.x(), p->center.y(), p->center.z()}}});
    } else if (const auto* c = std::get_if<CylinderPrimitive>(&prim)) {
      prims.push_back({{"type", "cylinder"},
                       {"radius", c->radius},
                       {"height", c->height},
                       {"resolution", c->resolution},
                       {"base", {c->base.x(), c->base.y(), c->base.z()}}});
    } else {
      const auto& b = std::get<BoxPrimitive>(prim);
      prims.push_back({{"type", "box"}, {"edge_length", b.edge_length}, {"resolution", b.resolution}});
    }
  }
  doc["primitives"] = prims;
  return doc.dump(2) + "\n";
}

}  // namespace shapebp
