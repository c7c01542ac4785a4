/**
 * Copyright 2026 The ColMix Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "colmix/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "colmix/error.hpp"
#include "json.hpp"

namespace colmix {

namespace fs = std::filesystem;

namespace {

template <size_t N>
std::array<double, N> linspace(double start, double stop) {
  // Same arithmetic as numpy.linspace, so thresholds agree bit-for-bit with the reference evaluator.
  std::array<double, N> out{};
  const double step = (stop - start) / double(N - 1);
  for (size_t i = 0; i < N; ++i) out[i] = start + double(i) * step;
  out[N - 1] = stop;
  return out;
}

}  // namespace

std::array<double, 10> coco_iou_thresholds() { return linspace<10>(0.5, 0.95); }
std::array<double, 101> coco_recall_thresholds() { return linspace<101>(0.0, 1.0); }

double iou(const BoxF& a, const BoxF& b) {
  const double iw = std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
  const double ih = std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
  if (iw <= 0 || ih <= 0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.w * a.h + b.w * b.h - inter;
  return uni > 0 ? inter / uni : 0.0;
}

std::vector<bool> match_detections(std::span<const BoxF> detections, std::span<const BoxF> ground_truths,
                                   double iou_threshold) {
  const double thr = std::min(iou_threshold, 1.0 - 1e-10);
  std::vector<bool> tp(detections.size(), false);
  std::vector<bool> taken(ground_truths.size(), false);
  for (size_t d = 0; d < detections.size(); ++d) {
    double best = thr;
    std::optional<size_t> match;
    for (size_t g = 0; g < ground_truths.size(); ++g) {
      if (taken[g]) continue;
      const double v = iou(detections[d], ground_truths[g]);
      if (v < best) continue;
      best = v;
      match = g;
    }
    if (match) {
      taken[*match] = true;
      tp[d] = true;
    }
  }
  return tp;
}

std::optional<double> average_precision(std::span<const ScoredMatch> matches, size_t gt_count) {
  if (gt_count == 0) return std::nullopt;
  std::vector<size_t> order(matches.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return matches[a].score > matches[b].score; });

  const size_t n = order.size();
  std::vector<double> recall(n);
  std::vector<double> precision(n);
  double tp = 0;
  double fp = 0;
  for (size_t i = 0; i < n; ++i) {
    matches[order[i]].true_positive ? ++tp : ++fp;
    recall[i] = tp / double(gt_count);
    precision[i] = tp / (tp + fp);
  }
  for (size_t i = n; i-- > 1;) precision[i - 1] = std::max(precision[i - 1], precision[i]);

  double sum = 0;
  for (double r : coco_recall_thresholds()) {
    const auto it = std::lower_bound(recall.begin(), recall.end(), r);
    if (it != recall.end()) sum += precision[size_t(it - recall.begin())];
  }
  return sum / 101.0;
}

EvalReport map_coco(std::span<const DetectionResult> detections, const Dataset& ground_truth) {
  std::map<ImageId, size_t> image_index;
  for (size_t i = 0; i < ground_truth.images.size(); ++i) image_index.emplace(ground_truth.images[i].id, i);

  // dets[category][image] in input order.
  std::map<CategoryId, std::vector<std::vector<size_t>>> dets;
  for (const auto& [cat, name] : ground_truth.categories) dets[cat].resize(ground_truth.images.size());
  for (size_t k = 0; k < detections.size(); ++k) {
    const auto& d = detections[k];
    const auto im = image_index.find(d.image_id);
    if (im == image_index.end()) {
      throw ValidationError("detection " + std::to_string(k) + " references unknown image_id " +
                            std::to_string(d.image_id));
    }
    const auto cat = dets.find(d.category);
    if (cat == dets.end()) {
      throw ValidationError("detection " + std::to_string(k) + " references unknown category_id " +
                            std::to_string(d.category));
    }
    if (!(d.score >= 0.0 && d.score <= 1.0)) {
      throw ValidationError("detection " + std::to_string(k) + " has score outside [0, 1]");
    }
    if (!(d.box.w > 0 && d.box.h > 0)) {
      throw ValidationError("detection " + std::to_string(k) + " has non-positive box size");
    }
    cat->second[im->second].push_back(k);
  }

  const auto thresholds = coco_iou_thresholds();
  EvalReport report;
  double class_sum = 0;
  size_t class_count = 0;

  for (auto& [cat, per_image] : dets) {
    size_t gt_count = 0;
    for (const auto& rec : ground_truth.images) {
      for (const auto& a : rec.annotations) gt_count += a.category == cat;
    }
    if (gt_count == 0) continue;

    std::array<double, 10> ap_at{};
    for (size_t t = 0; t < thresholds.size(); ++t) {
      std::vector<ScoredMatch> matches;
      for (size_t i = 0; i < ground_truth.images.size(); ++i) {
        std::vector<size_t> idx = per_image[i];
        std::stable_sort(idx.begin(), idx.end(),
                         [&](size_t a, size_t b) { return detections[a].score > detections[b].score; });
        std::vector<BoxF> det_boxes;
        for (size_t k : idx) det_boxes.push_back(detections[k].box);
        std::vector<BoxF> gt_boxes;
        for (const auto& a : ground_truth.images[i].annotations) {
          if (a.category == cat) gt_boxes.push_back(BoxF::from(a.box));
        }
        const auto tp = match_detections(det_boxes, gt_boxes, thresholds[t]);
        for (size_t j = 0; j < idx.size(); ++j) matches.push_back(ScoredMatch{detections[idx[j]].score, tp[j]});
      }
      ap_at[t] = *average_precision(matches, gt_count);
    }
    const double ap = std::accumulate(ap_at.begin(), ap_at.end(), 0.0) / double(ap_at.size());
    report.per_class_ap[cat] = ap;
    report.per_class_ap_at[cat] = ap_at;
    class_sum += ap;
    ++class_count;
  }
  if (class_count > 0) report.map = class_sum / double(class_count);
  return report;
}

double mapc(const CorruptionGrid& grid) {
  double total = 0;
  for (auto kind : kAllCorruptions) {
    double row = 0;
    for (int s : kAllSeverities) {
      const auto it = grid.find({kind, s});
      if (it == grid.end()) {
        throw ValidationError("incomplete corruption grid: missing cell " + std::string(to_string(kind)) + "/" +
                              std::to_string(s));
      }
      row += it->second;
    }
    total += row / 5.0;
  }
  return total / 15.0;
}

std::vector<DetectionResult> load_detections(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open detections file: " + file.string());
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(file.string() + ": " + e.what());
  }
  if (!root.is_array()) throw ParseError(file.string() + ": detections must be a JSON array");
  std::vector<DetectionResult> out;
  out.reserve(root.size());
  for (size_t i = 0; i < root.size(); ++i) {
    const auto& j = root[i];
    try {
      const auto bbox = j.at("bbox").get<std::vector<double>>();
      if (bbox.size() != 4) throw ParseError("bbox must have 4 elements");
      out.push_back(DetectionResult{j.at("image_id").get<ImageId>(), j.at("category_id").get<CategoryId>(),
                                    BoxF{bbox[0], bbox[1], bbox[2], bbox[3]}, j.at("score").get<double>()});
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(file.string() + ": detection " + std::to_string(i) + ": " + e.what());
    } catch (const ParseError& e) {
      throw ParseError(file.string() + ": detection " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

void save_detections(std::span<const DetectionResult> detections, const fs::path& file) {
  nlohmann::ordered_json root = nlohmann::ordered_json::array();
  for (const auto& d : detections) {
    root.push_back({{"image_id", d.image_id},
                    {"category_id", d.category},
                    {"bbox", {d.box.x, d.box.y, d.box.w, d.box.h}},
                    {"score", d.score}});
  }
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + file.string());
  out << root.dump() << '\n';
}

void write_report_json(const EvalReport& report, const std::map<CategoryId, std::string>& categories,
                       const fs::path& file) {
  nlohmann::ordered_json root;
  root["mAP"] = report.map ? nlohmann::ordered_json(*report.map) : nlohmann::ordered_json(nullptr);
  auto& classes = root["per_class"] = nlohmann::ordered_json::array();
  for (const auto& [cat, ap] : report.per_class_ap) {
    const auto name = categories.find(cat);
    classes.push_back({{"category_id", cat},
                       {"name", name == categories.end() ? std::to_string(cat) : name->second},
                       {"AP", ap},
                       {"AP50", report.per_class_ap_at.at(cat)[0]},
                       {"AP75", report.per_class_ap_at.at(cat)[5]}});
  }
  if (!report.grid.empty()) {
    auto& grid = root["corruptions"] = nlohmann::ordered_json::array();
    for (const auto& [cell, value] : report.grid) {
      grid.push_back({{"kind", std::string(to_string(cell.first))}, {"severity", cell.second}, {"mAP", value}});
    }
  }
  if (report.mapc) root["mAPc"] = *report.mapc;
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + file.string());
  out << root.dump(1) << '\n';
}

void write_report_csv(const EvalReport& report, const fs::path& file) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + file.string());
  out.precision(17);
  out << "kind,severity,mAP\n";
  if (report.map) out << "clean,0," << *report.map << '\n';
  for (const auto& [cell, value] : report.grid) out << to_string(cell.first) << ',' << cell.second << ',' << value << '\n';
}

}  // namespace colmix
