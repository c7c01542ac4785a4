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

#include "support.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <vector>

#include <opencv2/imgproc.hpp>

#include "colmix/corruption.hpp"
#include "colmix/random.hpp"

namespace colmix::testing {

namespace fs = std::filesystem;

namespace {

cv::Mat textured_background(int width, int height, Rng& rng) {
  cv::Mat img(height, width, CV_8UC3);
  const double fx = uniform_real(rng, 0.01, 0.05);
  const double fy = uniform_real(rng, 0.01, 0.05);
  const double phase = uniform_real(rng, 0.0, 6.28);
  const cv::Vec3d base(uniform_real(rng, 60, 180), uniform_real(rng, 60, 180), uniform_real(rng, 60, 180));
  std::normal_distribution<double> noise(0.0, 12.0);
  for (int y = 0; y < height; ++y) {
    auto* row = img.ptr<cv::Vec3b>(y);
    for (int x = 0; x < width; ++x) {
      const double wave = 40.0 * std::sin(fx * x + phase) * std::cos(fy * y);
      for (int c = 0; c < 3; ++c) row[x][c] = cv::saturate_cast<uint8_t>(base[c] + wave + noise(rng));
    }
  }
  return img;
}

}  // namespace

Dataset synthetic_dataset(const SyntheticSpec& spec) {
  Dataset ds;
  for (int c = 1; c <= spec.categories; ++c) ds.categories[c] = "class_" + std::to_string(c);
  Rng rng(derive_seed(spec.seed, {0x5e7}));
  for (int i = 0; i < spec.count; ++i) {
    cv::Mat img = textured_background(spec.width, spec.height, rng);
    const ImageId id = i + 1;
    std::vector<BBoxAnnotation> anns;
    const int n = uniform_int(rng, spec.min_objects, spec.max_objects);
    for (int k = 0; k < n; ++k) {
      const int w = uniform_int(rng, spec.min_side, spec.max_side);
      const int h = uniform_int(rng, spec.min_side, spec.max_side);
      const int x = uniform_int(rng, 0, spec.width - w);
      const int y = uniform_int(rng, 0, spec.height - h);
      const CategoryId cat = uniform_int(rng, 1, spec.categories);
      const cv::Scalar color(40 * cat % 256, 255 - 60 * cat % 256, 90 + 50 * cat % 166);
      cv::rectangle(img, cv::Rect(x, y, w, h), color, cv::FILLED);
      cv::line(img, cv::Point(x, y + h / 2), cv::Point(x + w - 1, y + h / 2), cv::Scalar(20, 20, 20), 2);
      anns.push_back(BBoxAnnotation{Rect{x, y, w, h}, cat, id});
    }
    ds.images.push_back(ImageRecord::from_pixels(id, img, std::move(anns), "img_" + std::to_string(id) + ".png"));
  }
  return ds;
}

Dataset write_synthetic(const SyntheticSpec& spec, const fs::path& dir) {
  save_dataset(synthetic_dataset(spec), dir);
  return load_dataset(dir / kAnnotationFile, dir / kImageDir);
}

cv::Mat synthetic_mixer(int size, uint64_t seed) {
  Rng rng(seed);
  std::vector<cv::Mat> planes;
  for (int c = 0; c < 3; ++c) {
    cv::Mat p = plasma_fractal(size, 3.0, rng);
    cv::Mat u8;
    p.convertTo(u8, CV_8U, 255.0);
    planes.push_back(u8);
  }
  cv::Mat out;
  cv::merge(planes, out);
  return out;
}

int64_t raster_union_area(const ImageRecord& record) {
  cv::Mat mask = cv::Mat::zeros(record.height, record.width, CV_8U);
  for (const auto& a : record.annotations) {
    for (int y = std::max(0, a.box.y); y < std::min(record.height, a.box.y + a.box.h); ++y) {
      for (int x = std::max(0, a.box.x); x < std::min(record.width, a.box.x + a.box.w); ++x) {
        mask.at<uint8_t>(y, x) = 1;
      }
    }
  }
  return cv::countNonZero(mask);
}

double raster_density(const ImageRecord& record) {
  return double(raster_union_area(record)) / (double(record.width) * double(record.height));
}

namespace {

std::map<std::string, fs::path> list_files(const fs::path& root, const std::string& ignore_name) {
  std::map<std::string, fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    if (!ignore_name.empty() && e.path().filename() == ignore_name) continue;
    files[fs::relative(e.path(), root).generic_string()] = e.path();
  }
  return files;
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

std::optional<std::string> compare_trees(const fs::path& a, const fs::path& b, const std::string& ignore_name) {
  const auto fa = list_files(a, ignore_name);
  const auto fb = list_files(b, ignore_name);
  if (fa.empty()) return "no files under " + a.string();
  for (const auto& [rel, path] : fa) {
    auto it = fb.find(rel);
    if (it == fb.end()) return rel + ": missing from second tree";
    if (read_bytes(path) != read_bytes(it->second)) return rel + ": contents differ";
  }
  for (const auto& [rel, path] : fb) {
    if (!fa.count(rel)) return rel + ": missing from first tree";
  }
  return std::nullopt;
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          ("colmix_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

}  // namespace colmix::testing
