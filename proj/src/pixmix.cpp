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

#include "colmix/pixmix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <opencv2/imgproc.hpp>

#include "colmix/error.hpp"
#include "colmix/parallel.hpp"

namespace colmix {

namespace fs = std::filesystem;

MixerSet MixerSet::load(const fs::path& dir, size_t* skipped) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw ConfigError("mixer directory does not exist: " + dir.string());
  std::vector<fs::path> candidates;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) candidates.push_back(entry.path());
  }
  std::sort(candidates.begin(), candidates.end());

  MixerSet set;
  size_t bad = 0;
  for (auto& path : candidates) {
    auto source = std::make_shared<const PixelSource>(path);
    try {
      source->get();
    } catch (const IoError&) {
      ++bad;
      continue;
    }
    set.files_.push_back(std::move(path));
    set.images_.push_back(std::move(source));
  }
  if (skipped) *skipped = bad;
  if (set.images_.empty()) throw ConfigError("no decodable mixer images in " + dir.string());
  return set;
}

MixerSet MixerSet::from_images(std::vector<cv::Mat> images) {
  if (images.empty()) throw ConfigError("mixer set must not be empty");
  MixerSet set;
  for (size_t i = 0; i < images.size(); ++i) {
    if (images[i].type() != CV_8UC3) throw ConfigError("mixer images must be CV_8UC3");
    set.files_.emplace_back("<memory:" + std::to_string(i) + ">");
    set.images_.push_back(std::make_shared<const PixelSource>(std::move(images[i])));
  }
  return set;
}

cv::Mat MixerSet::fitted(size_t i, int width, int height) const {
  const cv::Mat& src = image(i);
  int cw = src.cols;
  int ch = src.rows;
  if (int64_t{src.cols} * height > int64_t{width} * src.rows) {
    cw = std::max(1, int(std::lround(double(src.rows) * width / height)));
  } else {
    ch = std::max(1, int(std::lround(double(src.cols) * height / width)));
  }
  const cv::Mat crop = src(cv::Rect((src.cols - cw) / 2, (src.rows - ch) / 2, cw, ch));
  if (cw == width && ch == height) return crop;
  cv::Mat out;
  const int interp = (cw >= width && ch >= height) ? cv::INTER_AREA : cv::INTER_LINEAR;
  cv::resize(crop, out, cv::Size(width, height), 0, 0, interp);
  return out;
}

void PixMixConfig::validate() const {
  if (max_rounds < 0) throw ConfigError("pixmix max_rounds must be >= 0");
  if (!(blend_strength > 0.0)) throw ConfigError("pixmix blend_strength must be > 0");
  if (!additive && !multiplicative) throw ConfigError("pixmix needs at least one blend op");
}

BlendWeights draw_blend_weights(double blend_strength, Rng& rng) {
  BlendWeights w;
  if (uniform_real(rng, 0.0, 1.0) < 0.5) {
    w.a = sample_beta(rng, blend_strength, 1.0);
    w.b = sample_beta(rng, 1.0, blend_strength);
  } else {
    w.a = 1.0 + sample_beta(rng, 1.0, blend_strength);
    w.b = -sample_beta(rng, 1.0, blend_strength);
  }
  return w;
}

namespace {

// Element-wise arithmetic runs on single-channel views: OpenCV broadcasts a
// plain double scalar to the first channel only.
void clip_unit(cv::Mat& m) {
  cv::Mat flat = m.reshape(1);
  cv::patchNaNs(flat, 0.0);
  cv::max(flat, 0.0, flat);
  cv::min(flat, 1.0, flat);
}

}  // namespace

void blend_additive(cv::Mat& mixed, const cv::Mat& mixer, const BlendWeights& w) {
  // Blend in [-1, 1] and map back: ((a(2x-1) + b(2m-1)) + 1) / 2.
  cv::Mat lhs = mixed.reshape(1) * 2.0 - 1.0;
  cv::Mat rhs = mixer.reshape(1) * 2.0 - 1.0;
  cv::Mat out;
  cv::addWeighted(lhs, w.a, rhs, w.b, 0.0, out);
  out = (out + 1.0) * 0.5;
  mixed = out.reshape(mixed.channels());
  clip_unit(mixed);
}

void blend_multiplicative(cv::Mat& mixed, const cv::Mat& mixer, const BlendWeights& w) {
  // ((2x)^a * max(2m, 1e-37)^b) / 2
  cv::Mat lhs = mixed.reshape(1) * 2.0;
  cv::Mat rhs = mixer.reshape(1) * 2.0;
  rhs = cv::max(rhs, 1e-37);
  cv::pow(lhs, w.a, lhs);
  cv::pow(rhs, w.b, rhs);
  cv::Mat out = lhs.mul(rhs) * 0.5;
  mixed = out.reshape(mixed.channels());
  clip_unit(mixed);
}

std::vector<PixMixRound> draw_pixmix_rounds(const PixMixConfig& config, size_t mixer_count, Rng& rng) {
  config.validate();
  std::vector<PixMixRound> rounds(static_cast<size_t>(uniform_int(rng, 0, config.max_rounds)));
  std::vector<BlendOp> ops;
  if (config.additive) ops.push_back(BlendOp::kAdditive);
  if (config.multiplicative) ops.push_back(BlendOp::kMultiplicative);
  for (auto& r : rounds) {
    r.mixer = std::uniform_int_distribution<size_t>(0, mixer_count - 1)(rng);
    r.op = ops[std::uniform_int_distribution<size_t>(0, ops.size() - 1)(rng)];
    r.weights = draw_blend_weights(config.blend_strength, rng);
  }
  return rounds;
}

ImageRecord apply_pixmix(const ImageRecord& record, const MixerSet& mixers, const std::vector<PixMixRound>& rounds) {
  if (rounds.empty()) return record;
  cv::Mat mixed;
  record.pixels().convertTo(mixed, CV_32FC3, 1.0 / 255.0);
  for (const auto& r : rounds) {
    cv::Mat mixer;
    mixers.fitted(r.mixer, record.width, record.height).convertTo(mixer, CV_32FC3, 1.0 / 255.0);
    if (r.op == BlendOp::kAdditive) {
      blend_additive(mixed, mixer, r.weights);
    } else {
      blend_multiplicative(mixed, mixer, r.weights);
    }
  }
  cv::Mat out;
  mixed.convertTo(out, CV_8UC3, 255.0);
  ImageRecord result = record;
  result.set_pixels(std::move(out));
  return result;
}

ImageRecord pixmix_augment(const ImageRecord& record, const MixerSet& mixers, const PixMixConfig& config, Rng& rng) {
  return apply_pixmix(record, mixers, draw_pixmix_rounds(config, mixers.size(), rng));
}

Dataset pixmix_dataset(const Dataset& dataset, const MixerSet& mixers, const PixMixConfig& config,
                       const GenerateOptions& options, bool preserve_identity) {
  config.validate();
  if (options.epochs < 1) throw ConfigError("epochs must be >= 1");
  if (preserve_identity && options.epochs != 1) throw ConfigError("preserve_identity requires a single epoch");
  const size_t n = dataset.images.size();
  const size_t total = options.epochs * n;

  Dataset out;
  out.categories = dataset.categories;
  if (options.out_dir) out.root = *options.out_dir / kImageDir;
  out.images.resize(total);

  parallel_for(total, options.workers, [&](size_t k) {
    const size_t epoch = k / n;
    const size_t index = k % n;
    try {
      ImageRecord src = dataset.images[index];
      if (!preserve_identity) {
        src.id = sample_image_id(epoch, index, n);
        src.file_name = sample_file_name(epoch, index);
        for (auto& a : src.annotations) a.source_image = src.id;
      }
      Rng rng = sample_rng(config.seed, Stream::kPixMix, epoch, index);
      ImageRecord mixed = pixmix_augment(src, mixers, config, rng);
      if (options.out_dir) write_sample_image(mixed, *options.out_dir);
      out.images[k] = std::move(mixed);
    } catch (const Error& e) {
      throw Error("sample (epoch " + std::to_string(epoch) + ", index " + std::to_string(index) + "): " + e.what());
    }
  });
  return out;
}

GeneratedDataset colmix_a_pipeline(const Dataset& dataset, const CollageConfig& collage_config,
                                   const PixMixConfig& mix_config, const MixerSet& mixers,
                                   const GenerateOptions& options) {
  mix_config.validate();
  GenerateOptions opts = options;
  opts.post_process = [&](ImageRecord rec, size_t epoch, size_t index) {
    Rng rng = sample_rng(mix_config.seed, Stream::kPixMix, epoch, index);
    return pixmix_augment(rec, mixers, mix_config, rng);
  };
  return generate_collage_dataset(dataset, collage_config, opts);
}

StagedDatasets colmix_b_stage(const Dataset& dataset, const CollageConfig& collage_config,
                              const PixMixConfig& mix_config, const MixerSet& mixers, const GenerateOptions& options) {
  mix_config.validate();
  StagedDatasets staged;

  GenerateOptions stage1 = options;
  GenerateOptions stage2 = options;
  stage2.epochs = 1;
  if (options.out_dir) {
    stage1.out_dir = *options.out_dir / kStage1Dir;
    stage2.out_dir = *options.out_dir / kStage2Dir;
  }

  staged.stage1 = generate_collage_dataset(dataset, collage_config, stage1);
  staged.stage2 = pixmix_dataset(dataset, mixers, mix_config, stage2, /*preserve_identity=*/true);

  if (options.out_dir) {
    save_annotations(staged.stage1.dataset, *stage1.out_dir);
    write_paste_log(staged.stage1.samples, *stage1.out_dir / "paste_log.jsonl");
    save_annotations(staged.stage2, *stage2.out_dir);
  }
  return staged;
}

}  // namespace colmix
