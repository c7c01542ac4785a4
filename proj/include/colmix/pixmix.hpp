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

#ifndef COLMIX_PIXMIX_HPP_
#define COLMIX_PIXMIX_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <vector>

#include <opencv2/core.hpp>

#include "colmix/collage.hpp"
#include "colmix/dataset.hpp"
#include "colmix/random.hpp"

namespace colmix {

/// Fractal mixer images in lexicographic file order, decoded once and shared.
class MixerSet {
 public:
  /// Non-image or undecodable files are skipped and counted. Throws
  /// ConfigError when the directory is missing or yields no image.
  static MixerSet load(const std::filesystem::path& dir, size_t* skipped = nullptr);
  static MixerSet from_images(std::vector<cv::Mat> images);

  size_t size() const { return images_.size(); }
  const std::vector<std::filesystem::path>& files() const { return files_; }
  const cv::Mat& image(size_t i) const { return images_.at(i)->get(); }

  /// Mixer `i` center-cropped to the target aspect ratio and scaled to width x height.
  cv::Mat fitted(size_t i, int width, int height) const;

 private:
  std::vector<std::filesystem::path> files_;
  std::vector<std::shared_ptr<const PixelSource>> images_;
};

enum class BlendOp { kAdditive, kMultiplicative };

struct PixMixConfig {
  int max_rounds = 4;
  double blend_strength = 3.0;
  bool additive = true;
  bool multiplicative = true;
  uint64_t seed = 0;

  void validate() const;
};

/// Blend weights for one round: a scales the running image, b the mixer.
struct BlendWeights {
  double a = 1.0;
  double b = 0.0;
};

BlendWeights draw_blend_weights(double blend_strength, Rng& rng);

/// In-place blends on CV_32FC3 images with values in [0, 1]. The result is clipped to [0, 1].
void blend_additive(cv::Mat& mixed, const cv::Mat& mixer, const BlendWeights& w);
void blend_multiplicative(cv::Mat& mixed, const cv::Mat& mixer, const BlendWeights& w);

struct PixMixRound {
  size_t mixer = 0;
  BlendOp op = BlendOp::kAdditive;
  BlendWeights weights;
};

/// Rounds drawn for one image: count uniform in [0, max_rounds].
std::vector<PixMixRound> draw_pixmix_rounds(const PixMixConfig& config, size_t mixer_count, Rng& rng);

/// Applies explicit rounds; pixels only, boxes are copied untouched.
ImageRecord apply_pixmix(const ImageRecord& record, const MixerSet& mixers, const std::vector<PixMixRound>& rounds);

/// Blends the original image with randomly chosen fractal mixers.
ImageRecord pixmix_augment(const ImageRecord& record, const MixerSet& mixers, const PixMixConfig& config, Rng& rng);

/// PixMix over every image, one output per (epoch, index). With
/// `preserve_identity` (single epoch only) image ids and file names are kept.
Dataset pixmix_dataset(const Dataset& dataset, const MixerSet& mixers, const PixMixConfig& config,
                       const GenerateOptions& options, bool preserve_identity = false);

/// Collage pasting followed by PixMix on each sample.
GeneratedDataset colmix_a_pipeline(const Dataset& dataset, const CollageConfig& collage_config,
                                   const PixMixConfig& mix_config, const MixerSet& mixers,
                                   const GenerateOptions& options);

struct StagedDatasets {
  GeneratedDataset stage1;  // collage only
  Dataset stage2;           // PixMix on the original images, annotations untouched
};

inline constexpr const char* kStage1Dir = "stage1";
inline constexpr const char* kStage2Dir = "stage2";

/// Two datasets for pre-training on collages then fine-tuning on PixMix.
/// When options.out_dir is set they are written to `<out>/stage1` and `<out>/stage2`.
StagedDatasets colmix_b_stage(const Dataset& dataset, const CollageConfig& collage_config,
                              const PixMixConfig& mix_config, const MixerSet& mixers, const GenerateOptions& options);

}  // namespace colmix

#endif  // COLMIX_PIXMIX_HPP_
