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

#ifndef COLMIX_COLLAGE_HPP_
#define COLMIX_COLLAGE_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <opencv2/core.hpp>

#include "colmix/dataset.hpp"
#include "colmix/geometry.hpp"
#include "colmix/random.hpp"

namespace colmix {

enum class BaseMode { kExistingImage, kBlankCanvas };

std::string to_string(BaseMode mode);
BaseMode parse_base_mode(const std::string& text);

/// Collage pasting hyperparameters. Field names follow the usual
/// TargetDensity / MinSize / ... vocabulary of the algorithm.
struct CollageConfig {
  double target_density_lo = 0.05;
  double target_density_hi = 0.5;
  int min_size = 25;
  int max_dilation = 512;
  int max_expansions = 100;
  int min_step = 5;
  int max_step = 30;
  int64_t occlusion_tol = 20;
  double bbox_threshold = 50.0;  // percent
  BaseMode base_mode = BaseMode::kExistingImage;
  uint8_t canvas_fill = 128;
  uint64_t seed = 0;

  /// Throws ConfigError describing the first violated constraint.
  void validate() const;

  static CollageConfig rareplanes();
  static CollageConfig xview39();
};

/// Per-direction block expansion, (left, top, right, bottom).
struct Margins {
  std::array<int, 4> v{0, 0, 0, 0};

  int left() const { return v[0]; }
  int top() const { return v[1]; }
  int right() const { return v[2]; }
  int bottom() const { return v[3]; }
  int& operator[](size_t i) { return v[i]; }
  int operator[](size_t i) const { return v[i]; }

  friend bool operator==(const Margins&, const Margins&) = default;
};

/// Candidate paste anchors at multiples of min_size, kept in a stable order
/// until shuffled.
class CornerGrid {
 public:
  CornerGrid() = default;
  explicit CornerGrid(std::vector<Point> corners) : corners_(std::move(corners)) {}

  const std::vector<Point>& active() const { return corners_; }
  size_t size() const { return corners_.size(); }
  bool empty() const { return corners_.empty(); }

  void shuffle(Rng& rng);
  /// Drops corners lying inside any box; returns how many were removed.
  size_t remove_covered(std::span<const Rect> boxes);
  size_t remove_if(const std::function<bool(Point)>& covered);

 private:
  std::vector<Point> corners_;
};

CornerGrid build_corner_grid(const ImageRecord& record, int min_size);

/// Flat index over every annotation of a dataset, for uniform selection.
class AnnotationPool {
 public:
  explicit AnnotationPool(const Dataset& dataset);

  size_t size() const { return entries_.size(); }
  /// (image index, annotation index). Throws SelectionError when empty.
  std::pair<size_t, size_t> draw(Rng& rng) const;

 private:
  std::vector<std::pair<size_t, size_t>> entries_;
};

std::pair<const ImageRecord*, const BBoxAnnotation*> select_source_annotation(const Dataset& dataset, Rng& rng);

/// Rotates pixels and boxes clockwise by quarter_turns * 90 degrees.
ImageRecord rotate_source(const ImageRecord& record, int quarter_turns);
Rect rotate_rect(const Rect& r, int width, int height, int quarter_turns);

/// Counts target pixels inside a rectangle that are covered by existing boxes.
using OcclusionCounter = std::function<int64_t(const Rect&)>;

struct ExpansionResult {
  std::optional<Margins> margins;  // empty: no attempt committed
  int attempts = 0;
  int commits = 0;
  Rect block;               // last committed candidate block, anchored at the corner
  int64_t occlusion = 0;    // occluded pixels inside `block`
};

/// Block placed at `corner` with the bbox size grown by `margins`.
inline Rect candidate_block(const Rect& bbox, Point corner, const Margins& m) {
  return Rect{corner.x, corner.y, bbox.w + m.left() + m.right(), bbox.h + m.top() + m.bottom()};
}

ExpansionResult try_expand_block(const Rect& target_bounds, const Rect& bbox, Point corner,
                                 const CollageConfig& config, const OcclusionCounter& occlusion, Rng& rng);
ExpansionResult try_expand_block(const ImageRecord& target, const Rect& bbox, Point corner,
                                 const CollageConfig& config, Rng& rng);

struct PasteOutcome {
  Rect region;  // source coordinates, clipped to the source image
  Rect block;   // target coordinates
  std::vector<BBoxAnnotation> imported;  // target coordinates
  std::vector<Rect> imported_source_boxes;  // unclipped source boxes, parallel to `imported`
};

/// Copies the seed box grown by `margins` from `source` into `canvas` at
/// `corner` and imports source boxes that are at least `bbox_threshold`
/// percent inside the copied region.
PasteOutcome paste_block(cv::Mat& canvas, ImageId target_id, const ImageRecord& source, const BBoxAnnotation& seed,
                         Point corner, const Margins& margins, double bbox_threshold);
PasteOutcome paste_block(ImageRecord& target, const ImageRecord& source, const BBoxAnnotation& seed, Point corner,
                         const Margins& margins, double bbox_threshold);

struct PasteEntry {
  ImageId source_image = 0;
  int quarter_turns = 0;
  Rect seed_box;       // rotated source coordinates
  Point corner;
  Margins margins;
  Rect checked_block;  // block validated against bounds and occlusion
  Rect block;          // pasted block (shrinks when the region is clipped by the source)
  Rect region;         // rotated source coordinates
  int attempts = 0;
  int64_t occlusion = 0;
  bool fallback = false;
  std::vector<BBoxAnnotation> imported;
  std::vector<Rect> imported_source_boxes;
};

struct PasteLog {
  std::vector<PasteEntry> entries;
};

enum class Termination { kReachedTarget, kCornersExhausted, kStalled };
std::string to_string(Termination t);

struct CollageResult {
  ImageRecord image;
  PasteLog log;
  std::vector<BBoxAnnotation> base_annotations;
  double target_density = 0.0;
  Termination termination = Termination::kReachedTarget;
  size_t iterations = 0;
};

/// Consecutive iterations with no pixel gain and no corner removed before a
/// session gives up. Without it a grid whose remaining corners fit no
/// selectable box would never terminate.
inline constexpr int kMaxStalledIterations = 64;

ImageRecord blank_canvas(ImageId id, int width, int height, uint8_t fill, std::string file_name = {});

/// Collage pasting over a fixed source dataset. Thread-safe for concurrent run() calls.
class CollageEngine {
 public:
  CollageEngine(const Dataset& dataset, CollageConfig config);

  const CollageConfig& config() const { return config_; }
  const Dataset& dataset() const { return *dataset_; }

  /// Pastes onto `base` (pixels and boxes taken as-is) until the drawn density is reached.
  CollageResult run(const ImageRecord& base, Rng& rng) const;

 private:
  const Dataset* dataset_;
  CollageConfig config_;
  AnnotationPool pool_;
};

CollageResult collage_augment(const ImageRecord& base, const Dataset& dataset, const CollageConfig& config, Rng& rng);

struct SampleLog {
  ImageId image_id = 0;
  size_t epoch = 0;
  size_t index = 0;
  double target_density = 0.0;
  double final_density = 0.0;
  Termination termination = Termination::kReachedTarget;
  PasteLog log;
};

struct GenerateOptions {
  size_t epochs = 1;
  size_t workers = 1;
  /// When set, each image is written to `<out_dir>/images/` by its worker
  /// and the returned record reads it back lazily.
  std::optional<std::filesystem::path> out_dir{};
  /// Applied to each finished sample before it is written (ColMix-A chains PixMix here).
  std::function<ImageRecord(ImageRecord, size_t epoch, size_t index)> post_process{};
};

struct GeneratedDataset {
  Dataset dataset;
  std::vector<SampleLog> samples;  // (epoch, index) order
};

/// Output sample (epoch, index) gets id epoch * N + index + 1 and this file name.
std::string sample_file_name(size_t epoch, size_t index);
ImageId sample_image_id(size_t epoch, size_t index, size_t dataset_size);

/// Base record for sample `index`: the dataset image itself or a blank canvas of its size.
ImageRecord collage_base(const Dataset& dataset, size_t index, const CollageConfig& config, ImageId out_id);

GeneratedDataset generate_collage_dataset(const Dataset& dataset, const CollageConfig& config,
                                          const GenerateOptions& options);

/// Writes `record`'s pixels to `<out_dir>/images/<file_name>` and repoints the
/// record at that file.
void write_sample_image(ImageRecord& record, const std::filesystem::path& out_dir);
/// Annotation file only; images must already exist.
void save_annotations(const Dataset& dataset, const std::filesystem::path& out_dir);

/// One JSON object per line: a "paste" record per entry and a "sample" record per sample.
void write_paste_log(std::span<const SampleLog> samples, const std::filesystem::path& file);
std::vector<SampleLog> read_paste_log(const std::filesystem::path& file);

struct MosaicResult {
  ImageRecord image;
  std::vector<Rect> tiles;           // row-major
  std::vector<size_t> tile_sources;  // dataset image index per tile
};

/// Tiles the output into `cols` x `rows` cells, each copied from the matching
/// cell of a randomly chosen (and, if needed, resized) dataset image.
MosaicResult mosaic_augment(const Dataset& dataset, int cols, int rows, double bbox_threshold, Rng& rng,
                            ImageId out_id = 0);
std::vector<Rect> tile_grid(int width, int height, int cols, int rows);

struct BBoxPasteResult {
  ImageRecord image;
  size_t pasted = 0;
  size_t failed = 0;  // chips that found no free position
};

inline constexpr int kBBoxPasteRetries = 100;

/// Pastes `count` bare box chips at random positions that overlap no box in the target.
BBoxPasteResult bbox_paste_augment(const ImageRecord& target, const Dataset& dataset, size_t count, Rng& rng);

}  // namespace colmix

#endif  // COLMIX_COLLAGE_HPP_
