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

#ifndef COLMIX_TESTS_SUPPORT_HPP_
#define COLMIX_TESTS_SUPPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <opencv2/core.hpp>

#include "colmix/dataset.hpp"

namespace colmix::testing {

/// Parameters of a sparse synthetic detection corpus.
struct SyntheticSpec {
  int count = 20;
  int width = 512;
  int height = 512;
  int min_objects = 3;
  int max_objects = 6;
  int min_side = 12;
  int max_side = 32;
  int categories = 3;
  uint64_t seed = 1;
};

/// Textured backgrounds with small filled objects. Boxes may overlap.
Dataset synthetic_dataset(const SyntheticSpec& spec);

/// Writes the corpus to `dir` (annotations.json + images/) and returns it reloaded from disk.
Dataset write_synthetic(const SyntheticSpec& spec, const std::filesystem::path& dir);

/// Colored plasma image usable as a PixMix mixer.
cv::Mat synthetic_mixer(int size, uint64_t seed);

/// Union area computed by painting every box into a mask.
int64_t raster_union_area(const ImageRecord& record);
double raster_density(const ImageRecord& record);

/// First difference between two directory trees (relative path and reason),
/// comparing file lists and bytes. Files named `ignore_name` are skipped.
std::optional<std::string> compare_trees(const std::filesystem::path& a, const std::filesystem::path& b,
                                         const std::string& ignore_name = {});

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace colmix::testing

#endif  // COLMIX_TESTS_SUPPORT_HPP_
