#include "shapebp/metrics.hpp"

#include "shapebp/error.hpp"

#include <fmt/format.h>
#include <json.hpp>

namespace shapebp {

Confusion confusion(const LabelMask& pred, const LabelMask& gt, Label positive) {
  if (pred.size() != gt.size()) {
    throw Error(Errc::length_mismatch,
                fmt::format("prediction has {} labels, ground truth has {}", pred.size(), gt.size()));
  }
  Confusion c;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (gt[i] == Label::unlabeled) continue;
    const bool p = pred[i] == positive;
    const bool g = gt[i] == positive;
    if (p && g) ++c.tp;
    else if (p) ++c.fp;
    else if (g) ++c.fn;
    else ++c.tn;
  }
  return c;
}

namespace {

double ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ClassMetrics class_metrics(const Confusion& c, Label label) {
  ClassMetrics m;
  m.label = label;
  m.counts = c;
  m.precision = ratio(c.tp, c.tp + c.fp);
  m.recall = ratio(c.tp, c.tp + c.fn);
  const double s = m.precision + m.recall;
  m.f1 = s > 0.0 ? 2.0 * m.precision * m.recall / s : 0.0;
  m.iou = ratio(c.tp, c.tp + c.fp + c.fn);
  return m;
}

const ClassMetrics& MetricsReport::at(Label label) const {
  for (const auto& c : classes) {
    if (c.label == label) return c;
  }
  throw Error(Errc::invalid_argument, fmt::format("class '{}' not in report", label_name(label)));
}

MetricsReport metrics(const LabelMask& pred, const LabelMask& gt, const std::vector<Label>& classes) {
  if (classes.empty()) throw Error(Errc::invalid_argument, "no classes to evaluate");
  MetricsReport report;
  double iou_sum = 0.0;
  for (const Label label : classes) {
    report.classes.push_back(class_metrics(confusion(pred, gt, label), label));
    iou_sum += report.classes.back().iou;
  }
  report.miou = iou_sum / static_cast<double>(classes.size());
  return report;
}

std::string to_json(const MetricsReport& report) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json classes = nlohmann::ordered_json::object();
  for (const auto& c : report.classes) {
    classes[label_name(c.label)] = {{"precision", c.precision},
                                    {"recall", c.recall},
                                    {"f1", c.f1},
                                    {"iou", c.iou},
                                    {"tp", c.counts.tp},
                                    {"fp", c.counts.fp},
                                    {"fn", c.counts.fn},
                                    {"tn", c.counts.tn}};
  }
  doc["classes"] = classes;
  doc["miou"] = report.miou;
  doc["parameters"] = report.parameters;
  if (!report.timings_s.empty()) doc["timings_s"] = report.timings_s;
  return doc.dump(2) + "\n";
}

std::string to_table(const MetricsReport& report) {
  std::string out = fmt::format("{:<10} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9}\n", "class", "precision",
                                "recall", "f1", "iou", "tp", "fp", "fn");
  for (const auto& c : report.classes) {
    out += fmt::format("{:<10} {:>9.4f} {:>9.4f} {:>9.4f} {:>9.4f} {:>9} {:>9} {:>9}\n", label_name(c.label),
                       c.precision, c.recall, c.f1, c.iou, c.counts.tp, c.counts.fp, c.counts.fn);
  }
  out += fmt::format("{:<10} {:>9.4f}\n", "mIoU", report.miou);
  return out;
}

}  // namespace shapebp
