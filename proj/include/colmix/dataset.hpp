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

#ifndef COLMIX_DATASET_HPP_
#define COLMIX_DATASET_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <opencv2/core.hpp>

#include "colmix/geometry.hpp"

namespace colmix {

using ImageId = int64_t;
using CategoryId = int64_t;

struct BBoxAnnotation {
  Rect box;
  CategoryId category = 0;
  ImageId source_image = 0;

  friend bool operator==(const BBoxAnnotation&, const BBoxAnnotation&) = default;
};

/// Lazily decoded, memoized pixel buffer shared between copies of a record.
/// Safe to read from many threads; the first reader decodes.
class PixelSource {
 public:
  explicit PixelSource(std::filesystem::path file);
  explicit PixelSource(cv::Mat pixels);

  /// Shared 8-bit BGR buffer. Throws IoError if the backing file cannot be decoded.
  const cv::Mat& get() const;
  const std::filesystem::path& file() const { return file_; }

 private:
  std::filesystem::path file_;
  mutable std::once_flag once_;
  mutable cv::Mat pixels_;
};

struct ImageRecord {
  ImageId id = 0;
  int width = 0;
  int height = 0;
  std::string file_name;
  std::vector<BBoxAnnotation> annotations;

  ImageRecord() = default;
  ImageRecord(ImageId id, int width, int height, std::string file_name,
              std::vector<BBoxAnnotation> annotations, std::shared_ptr<const PixelSource> source);

  /// Record owning an in-memory CV_8UC3 buffer; width/height are taken from it.
  static ImageRecord from_pixels(ImageId id, cv::Mat pixels, std::vector<BBoxAnnotation> annotations,
                                 std::string file_name = {});

  /// Decoded pixels. The returned Mat aliases the shared buffer: clone before writing.
  const cv::Mat& pixels() const;
  bool has_pixel_source() const { return static_cast<bool>(source_); }
  void set_pixels(cv::Mat pixels);

  Rect bounds() const { return Rect{0, 0, width, height}; }
  std::vector<Rect> boxes() const;

 private:
  std::shared_ptr<const PixelSource> source_;
};

struct Dataset {
  std::vector<ImageRecord> images;
  std::map<CategoryId, std::string> categories;
  std::filesystem::path root;

  size_t annotation_count() const;
};

struct LoadStats {
  size_t dropped_annotations = 0;  // zero area after clipping
  size_t clipped_annotations = 0;
};

/// Reads a COCO-style annotation file. Boxes are snapped outward to integer
/// pixels and clipped to the image. Pixel files are not touched until first use.
Dataset load_dataset(const std::filesystem::path& annotation_file, const std::filesystem::path& image_root,
                     LoadStats* stats = nullptr);

/// Writes `<out_dir>/annotations.json` and `<out_dir>/images/<file_name>`.
void save_dataset(const Dataset& dataset, const std::filesystem::path& out_dir);

/// Annotation file name used by save_dataset.
inline constexpr const char* kAnnotationFile = "annotations.json";
inline constexpr const char* kImageDir = "images";

/// Fraction of pixels covered by the union of the record's boxes.
double object_density(const ImageRecord& record);

struct DensityStats {
  std::vector<double> densities;  // dataset image order
  std::vector<size_t> histogram;  // bins of width 1/histogram.size() over [0, 1]
  std::optional<double> mean;
  std::optional<double> median;
};

DensityStats density_stats(const Dataset& dataset, size_t bins = 20);

}  // namespace colmix

#endif  // COLMIX_DATASET_HPP_
