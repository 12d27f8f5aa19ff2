#pragma once

#include "shapebp/point_cloud.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>

namespace shapebp {

enum class CloudFormat { pcd_ascii, ply_ascii, xyz };

std::optional<CloudFormat> parse_cloud_format(std::string_view name) noexcept;
std::optional<CloudFormat> format_from_extension(const std::filesystem::path& path) noexcept;
std::string_view to_string(CloudFormat format) noexcept;

struct LoadOptions {
  // Drop records whose coordinates are NaN/Inf instead of failing. Off by
  // default: a non-finite coordinate is a non-finite-coordinate error.
  bool drop_non_finite = false;
};

/// Reads an ASCII cloud. Normals are populated when the file carries them;
/// a normal with a non-finite component or a norm off 1 by more than 1e-4 is
/// loaded as invalid; the rest are renormalized.
PointCloud load_cloud(const std::filesystem::path& path, CloudFormat format,
                      const LoadOptions& options = {});
PointCloud load_cloud(const std::filesystem::path& path);

/// Coordinates are written with 6 fractional digits.
void save_cloud(const PointCloud& cloud, const std::filesystem::path& path, CloudFormat format);

LabelMask load_labels(const std::filesystem::path& path);
void save_labels(const LabelMask& labels, const std::filesystem::path& path);

/// Throws length-mismatch unless the mask is index-aligned with the cloud.
void check_pairing(const PointCloud& cloud, const LabelMask& labels);

using Rgb = std::array<std::uint8_t, 3>;

/// ASCII PLY with per-vertex red/green/blue, for visual inspection.
void save_colored_ply(const PointCloud& cloud, std::span<const Rgb> colors,
                      const std::filesystem::path& path);

/// Green (1.0) to blue (0.0) ramp used for likelihood renderings.
Rgb likelihood_color(double score) noexcept;
Rgb label_color(Label label) noexcept;

}  // namespace shapebp
