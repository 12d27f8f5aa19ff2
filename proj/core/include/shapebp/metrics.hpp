#pragma once

#include "shapebp/point_cloud.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace shapebp {

struct Confusion {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  bool operator==(const Confusion&) const = default;
};

/// Binary counts for `positive`; points whose ground truth is unlabeled are
/// skipped. Throws length-mismatch.
Confusion confusion(const LabelMask& pred, const LabelMask& gt, Label positive);

struct ClassMetrics {
  Label label = Label::planar;
  Confusion counts;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double iou = 0.0;
};

/// Ratios with a zero denominator are 0.
ClassMetrics class_metrics(const Confusion& c, Label label);

struct MetricsReport {
  std::vector<ClassMetrics> classes;
  double miou = 0.0;
  std::map<std::string, double> parameters;  ///< echoed run parameters
  std::map<std::string, double> timings_s;   ///< wall times in seconds

  const ClassMetrics& at(Label label) const;
};

/// Per-class metrics for `classes`; mIoU is their mean IoU.
MetricsReport metrics(const LabelMask& pred, const LabelMask& gt, const std::vector<Label>& classes);

std::string to_json(const MetricsReport& report);
/// Aligned plain-text table, one row per class.
std::string to_table(const MetricsReport& report);

}  // namespace shapebp
