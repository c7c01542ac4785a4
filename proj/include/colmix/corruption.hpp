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

#ifndef COLMIX_CORRUPTION_HPP_
#define COLMIX_CORRUPTION_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <opencv2/core.hpp>

#include "colmix/dataset.hpp"
#include "colmix/random.hpp"

namespace colmix {

enum class CorruptionKind {
  kGaussianNoise,
  kShotNoise,
  kImpulseNoise,
  kDefocusBlur,
  kGlassBlur,
  kMotionBlur,
  kZoomBlur,
  kSnow,
  kFrost,
  kFog,
  kBrightness,
  kContrast,
  kElasticTransform,
  kPixelate,
  kJpegCompression,
};

inline constexpr std::array<CorruptionKind, 15> kAllCorruptions = {
    CorruptionKind::kGaussianNoise, CorruptionKind::kShotNoise,   CorruptionKind::kImpulseNoise,
    CorruptionKind::kDefocusBlur,   CorruptionKind::kGlassBlur,   CorruptionKind::kMotionBlur,
    CorruptionKind::kZoomBlur,      CorruptionKind::kSnow,        CorruptionKind::kFrost,
    CorruptionKind::kFog,           CorruptionKind::kBrightness,  CorruptionKind::kContrast,
    CorruptionKind::kElasticTransform, CorruptionKind::kPixelate, CorruptionKind::kJpegCompression,
};
inline constexpr std::array<int, 5> kAllSeverities = {1, 2, 3, 4, 5};

std::string_view to_string(CorruptionKind kind);
/// Throws ConfigError listing the valid names.
CorruptionKind parse_corruption_kind(std::string_view name);

struct CorruptionSpec {
  CorruptionKind kind = CorruptionKind::kGaussianNoise;
  int severity = 1;

  void validate() const;
  friend bool operator==(const CorruptionSpec&, const CorruptionSpec&) = default;
};

/// Factor applied to pixel-sized constants: image diagonal over the 224 x 224 diagonal.
double spatial_scale(int width, int height);

/// Corrupts an 8-bit BGR image; output has the same size and type.
cv::Mat corrupt_pixels(const cv::Mat& bgr, const CorruptionSpec& spec, Rng& rng);

/// Pixels corrupted, boxes untouched.
ImageRecord corrupt_image(const ImageRecord& record, const CorruptionSpec& spec, Rng& rng);

// Individual kernels, exposed for tests. Float images are CV_32FC3 in [0, 1].
cv::Mat add_gaussian_noise(const cv::Mat& bgr, double sigma, Rng& rng);
cv::Mat disk_kernel(double radius, double alias_sigma);
cv::Mat motion_kernel(double radius, double sigma, double angle_deg);
cv::Mat plasma_fractal(int mapsize, double wibble_decay, Rng& rng);

/// `<root>/<kind>/<severity>`.
std::filesystem::path corruption_cell_dir(const std::filesystem::path& root, const CorruptionSpec& spec);

struct CorruptionSuiteOptions {
  std::vector<CorruptionKind> kinds{kAllCorruptions.begin(), kAllCorruptions.end()};
  std::vector<int> severities{kAllSeverities.begin(), kAllSeverities.end()};
  uint64_t seed = 0;
  size_t workers = 1;
};

/// Generator for image `index` of a cell.
Rng corruption_rng(uint64_t seed, const CorruptionSpec& spec, size_t index);

/// Writes one complete dataset (same annotations and file names as the
/// input) per (kind, severity) cell. Returns the cells in write order.
std::vector<CorruptionSpec> corrupt_dataset(const Dataset& dataset, const CorruptionSuiteOptions& options,
                                            const std::filesystem::path& out_dir);

}  // namespace colmix

#endif  // COLMIX_CORRUPTION_HPP_
