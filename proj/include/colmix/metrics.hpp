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

#ifndef COLMIX_METRICS_HPP_
#define COLMIX_METRICS_HPP_

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "colmix/corruption.hpp"
#include "colmix/dataset.hpp"

namespace colmix {

/// Continuous box, (x, y, w, h) in pixels.
struct BoxF {
  double x = 0;
  double y = 0;
  double w = 0;
  double h = 0;

  static BoxF from(const Rect& r) { return BoxF{double(r.x), double(r.y), double(r.w), double(r.h)}; }
};

struct DetectionResult {
  ImageId image_id = 0;
  CategoryId category = 0;
  BoxF box;
  double score = 0;
};

double iou(const BoxF& a, const BoxF& b);

/// Greedy one-to-one matching of detections (already in descending score
/// order) to ground truths of one image and class. Each detection takes the
/// unmatched ground truth of highest IoU >= threshold; among equal IoUs the
/// later ground truth wins, as in the COCO reference evaluator.
std::vector<bool> match_detections(std::span<const BoxF> detections, std::span<const BoxF> ground_truths,
                                   double iou_threshold);

struct ScoredMatch {
  double score = 0;
  bool true_positive = false;
};

/// 101-point interpolated AP. Matches are ranked by descending score, ties in
/// input order. Returns nullopt when gt_count == 0 (class has no ground truth).
std::optional<double> average_precision(std::span<const ScoredMatch> matches, size_t gt_count);

/// 0.50, 0.55, ..., 0.95.
std::array<double, 10> coco_iou_thresholds();
/// 0.00, 0.01, ..., 1.00.
std::array<double, 101> coco_recall_thresholds();

using CorruptionCell = std::pair<CorruptionKind, int>;
using CorruptionGrid = std::map<CorruptionCell, double>;

struct EvalReport {
  std::map<CategoryId, double> per_class_ap;  // averaged over IoU thresholds
  std::map<CategoryId, std::array<double, 10>> per_class_ap_at;
  std::optional<double> map;  // nullopt when no class has ground truth
  CorruptionGrid grid;
  std::optional<double> mapc;
};

/// COCO-style mAP over IoU 0.50:0.95. Throws ValidationError for detections
/// referencing unknown images or categories, or with invalid score/box.
EvalReport map_coco(std::span<const DetectionResult> detections, const Dataset& ground_truth);

/// Mean over 15 kinds of the mean over 5 severities. Throws ValidationError
/// naming the first missing cell.
double mapc(const CorruptionGrid& grid);

std::vector<DetectionResult> load_detections(const std::filesystem::path& file);
void save_detections(std::span<const DetectionResult> detections, const std::filesystem::path& file);

void write_report_json(const EvalReport& report, const std::map<CategoryId, std::string>& categories,
                       const std::filesystem::path& file);
/// Rows: kind,severity,mAP. A "clean" row (severity 0) is written first when mAP is present.
void write_report_csv(const EvalReport& report, const std::filesystem::path& file);

}  // namespace colmix

#endif  // COLMIX_METRICS_HPP_
