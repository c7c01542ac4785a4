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

#include "colmix/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include <opencv2/imgcodecs.hpp>

#include "colmix/error.hpp"
#include "json.hpp"

namespace colmix {

namespace fs = std::filesystem;
using nlohmann::json;

PixelSource::PixelSource(fs::path file) : file_(std::move(file)) {}

PixelSource::PixelSource(cv::Mat pixels) : pixels_(std::move(pixels)) {
  std::call_once(once_, [] {});
}

const cv::Mat& PixelSource::get() const {
  // call_once leaves the flag unset when the callable throws, so a missing
  // file keeps reporting on every access.
  std::call_once(once_, [this] {
    cv::Mat decoded = cv::imread(file_.string(), cv::IMREAD_COLOR);
    if (decoded.empty()) throw IoError("cannot decode image file: " + file_.string());
    pixels_ = std::move(decoded);
  });
  return pixels_;
}

ImageRecord::ImageRecord(ImageId id_, int width_, int height_, std::string file_name_,
                         std::vector<BBoxAnnotation> annotations_, std::shared_ptr<const PixelSource> source)
    : id(id_),
      width(width_),
      height(height_),
      file_name(std::move(file_name_)),
      annotations(std::move(annotations_)),
      source_(std::move(source)) {}

ImageRecord ImageRecord::from_pixels(ImageId id, cv::Mat pixels, std::vector<BBoxAnnotation> annotations,
                                     std::string file_name) {
  if (pixels.type() != CV_8UC3) throw InvariantError("pixel buffer must be CV_8UC3");
  const int w = pixels.cols;
  const int h = pixels.rows;
  return ImageRecord(id, w, h, std::move(file_name), std::move(annotations),
                     std::make_shared<const PixelSource>(std::move(pixels)));
}

const cv::Mat& ImageRecord::pixels() const {
  if (!source_) throw IoError("image " + std::to_string(id) + " has no pixel source");
  const cv::Mat& m = source_->get();
  if (m.cols != width || m.rows != height) {
    throw IoError("image " + std::to_string(id) + " decoded as " + std::to_string(m.cols) + "x" +
                  std::to_string(m.rows) + ", annotation file says " + std::to_string(width) + "x" +
                  std::to_string(height));
  }
  return m;
}

void ImageRecord::set_pixels(cv::Mat pixels) {
  if (pixels.type() != CV_8UC3) throw InvariantError("pixel buffer must be CV_8UC3");
  width = pixels.cols;
  height = pixels.rows;
  source_ = std::make_shared<const PixelSource>(std::move(pixels));
}

std::vector<Rect> ImageRecord::boxes() const {
  std::vector<Rect> out;
  out.reserve(annotations.size());
  for (const auto& a : annotations) out.push_back(a.box);
  return out;
}

size_t Dataset::annotation_count() const {
  size_t n = 0;
  for (const auto& im : images) n += im.annotations.size();
  return n;
}

namespace {

[[noreturn]] void parse_fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

template <typename T>
T require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) parse_fail(where, std::string("missing field '") + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    parse_fail(where, std::string("field '") + key + "': " + e.what());
  }
}

const json& require_array(const json& root, const char* key) {
  auto it = root.find(key);
  if (it == root.end() || !it->is_array()) parse_fail("annotation file", std::string("missing array '") + key + "'");
  return *it;
}

}  // namespace

Dataset load_dataset(const fs::path& annotation_file, const fs::path& image_root, LoadStats* stats) {
  std::ifstream in(annotation_file);
  if (!in) throw IoError("cannot open annotation file: " + annotation_file.string());
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(annotation_file.string() + ": " + e.what());
  }
  if (!root.is_object()) throw ParseError(annotation_file.string() + ": top level must be an object");

  Dataset ds;
  ds.root = image_root;
  LoadStats local;

  for (const auto& c : require_array(root, "categories")) {
    const std::string where = "category " + c.dump();
    const auto id = require<CategoryId>(c, "id", where);
    auto name = c.contains("name") ? require<std::string>(c, "name", where) : std::to_string(id);
    if (!ds.categories.emplace(id, std::move(name)).second) parse_fail(where, "duplicate category id");
  }

  std::map<ImageId, size_t> index;
  for (const auto& im : require_array(root, "images")) {
    const std::string where = "image " + im.dump();
    const auto id = require<ImageId>(im, "id", where);
    const auto w = require<int>(im, "width", where);
    const auto h = require<int>(im, "height", where);
    auto file_name = require<std::string>(im, "file_name", where);
    if (w < 1 || h < 1) parse_fail(where, "width and height must be >= 1");
    if (!index.emplace(id, ds.images.size()).second) parse_fail(where, "duplicate image id");
    auto source = std::make_shared<const PixelSource>(image_root / file_name);
    ds.images.emplace_back(id, w, h, std::move(file_name), std::vector<BBoxAnnotation>{}, std::move(source));
  }

  for (const auto& a : require_array(root, "annotations")) {
    const std::string where = "annotation " + a.dump();
    const auto image_id = require<ImageId>(a, "image_id", where);
    const auto category = require<CategoryId>(a, "category_id", where);
    const auto bbox = require<std::vector<double>>(a, "bbox", where);
    if (bbox.size() != 4) parse_fail(where, "bbox must have 4 elements");
    for (double v : bbox) {
      if (!std::isfinite(v)) parse_fail(where, "bbox has non-finite value");
    }
    auto it = index.find(image_id);
    if (it == index.end()) parse_fail(where, "unknown image_id " + std::to_string(image_id));
    if (!ds.categories.contains(category)) parse_fail(where, "unknown category_id " + std::to_string(category));

    ImageRecord& rec = ds.images[it->second];
    // Snap outward to the pixel grid; integer boxes pass through unchanged.
    const double x0 = std::floor(bbox[0]);
    const double y0 = std::floor(bbox[1]);
    const double x1 = std::ceil(bbox[0] + bbox[2]);
    const double y1 = std::ceil(bbox[1] + bbox[3]);
    const double cx0 = std::clamp(x0, 0.0, double(rec.width));
    const double cy0 = std::clamp(y0, 0.0, double(rec.height));
    const double cx1 = std::clamp(x1, 0.0, double(rec.width));
    const double cy1 = std::clamp(y1, 0.0, double(rec.height));
    if (cx1 <= cx0 || cy1 <= cy0 || bbox[2] <= 0 || bbox[3] <= 0) {
      ++local.dropped_annotations;
      continue;
    }
    if (cx0 != x0 || cy0 != y0 || cx1 != x1 || cy1 != y1) ++local.clipped_annotations;
    const Rect box{int(cx0), int(cy0), int(cx1 - cx0), int(cy1 - cy0)};
    rec.annotations.push_back(BBoxAnnotation{box, category, rec.id});
  }

  if (stats) *stats = local;
  return ds;
}

void save_dataset(const Dataset& dataset, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir / kImageDir, ec);
  if (ec) throw IoError("cannot create " + (out_dir / kImageDir).string() + ": " + ec.message());

  nlohmann::ordered_json root;
  root["images"] = nlohmann::ordered_json::array();
  root["annotations"] = nlohmann::ordered_json::array();
  root["categories"] = nlohmann::ordered_json::array();

  int64_t next_ann_id = 1;
  std::set<std::string> names;
  for (const auto& rec : dataset.images) {
    std::string file_name = rec.file_name.empty() ? std::to_string(rec.id) + ".png" : rec.file_name;
    if (!names.insert(file_name).second) throw IoError("duplicate output file name: " + file_name);
    const fs::path dest = out_dir / kImageDir / file_name;
    fs::create_directories(dest.parent_path(), ec);
    if (!cv::imwrite(dest.string(), rec.pixels())) throw IoError("cannot write image " + dest.string());

    root["images"].push_back({{"id", rec.id}, {"file_name", file_name}, {"width", rec.width}, {"height", rec.height}});
    for (const auto& a : rec.annotations) {
      root["annotations"].push_back({{"id", next_ann_id++},
                                     {"image_id", rec.id},
                                     {"category_id", a.category},
                                     {"bbox", {a.box.x, a.box.y, a.box.w, a.box.h}},
                                     {"area", a.box.area()},
                                     {"iscrowd", 0}});
    }
  }
  for (const auto& [id, name] : dataset.categories) root["categories"].push_back({{"id", id}, {"name", name}});

  const fs::path ann = out_dir / kAnnotationFile;
  std::ofstream out(ann, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + ann.string());
  out << root.dump(1) << '\n';
  if (!out) throw IoError("write failed: " + ann.string());
}

double object_density(const ImageRecord& record) {
  const int64_t total = int64_t{record.width} * record.height;
  if (total <= 0) return 0.0;
  const auto boxes = record.boxes();
  return double(union_area(boxes, record.bounds())) / double(total);
}

DensityStats density_stats(const Dataset& dataset, size_t bins) {
  DensityStats s;
  s.histogram.assign(std::max<size_t>(bins, 1), 0);
  s.densities.reserve(dataset.images.size());
  for (const auto& rec : dataset.images) s.densities.push_back(object_density(rec));
  if (s.densities.empty()) return s;

  double sum = 0.0;
  for (double d : s.densities) {
    sum += d;
    auto bin = static_cast<size_t>(d * double(s.histogram.size()));
    s.histogram[std::min(bin, s.histogram.size() - 1)]++;
  }
  s.mean = sum / double(s.densities.size());

  std::vector<double> sorted = s.densities;
  std::sort(sorted.begin(), sorted.end());
  const size_t n = sorted.size();
  s.median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  return s;
}

}  // namespace colmix
