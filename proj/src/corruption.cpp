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

#include "colmix/corruption.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "colmix/collage.hpp"
#include "colmix/error.hpp"
#include "colmix/parallel.hpp"

namespace colmix {

namespace fs = std::filesystem;

namespace {

constexpr std::array<std::string_view, 15> kNames = {
    "gaussian_noise", "shot_noise", "impulse_noise", "defocus_blur", "glass_blur",
    "motion_blur",    "zoom_blur",  "snow",          "frost",        "fog",
    "brightness",     "contrast",   "elastic_transform", "pixelate", "jpeg_compression",
};

// Severity tables of the standard 15-corruption benchmark (224 x 224 reference).
constexpr double kGaussianSigma[] = {0.08, 0.12, 0.18, 0.26, 0.38};
constexpr double kShotRate[] = {60, 25, 12, 5, 3};
constexpr double kImpulseAmount[] = {0.03, 0.06, 0.09, 0.17, 0.27};
constexpr double kDefocus[][2] = {{3, 0.1}, {4, 0.5}, {6, 0.5}, {8, 0.5}, {10, 0.5}};
constexpr double kGlass[][3] = {{0.7, 1, 2}, {0.9, 2, 1}, {1, 2, 3}, {1.1, 3, 2}, {1.5, 4, 2}};
constexpr double kMotion[][2] = {{10, 3}, {15, 5}, {15, 8}, {15, 12}, {20, 15}};
constexpr double kZoom[][3] = {{1.0, 1.10, 0.01}, {1.0, 1.15, 0.01}, {1.0, 1.20, 0.01}, {1.0, 1.24, 0.01},
                               {1.0, 1.30, 0.01}};
constexpr double kSnow[][7] = {{0.1, 0.3, 3, 0.5, 10, 4, 0.8},
                               {0.2, 0.3, 2, 0.5, 12, 4, 0.7},
                               {0.55, 0.3, 4, 0.9, 12, 8, 0.7},
                               {0.55, 0.3, 4.5, 0.85, 12, 8, 0.65},
                               {0.55, 0.3, 2.5, 0.85, 12, 12, 0.55}};
constexpr double kFrost[][2] = {{1, 0.4}, {0.8, 0.6}, {0.7, 0.7}, {0.65, 0.7}, {0.6, 0.75}};
constexpr double kFog[][2] = {{1.5, 2}, {2.0, 2}, {2.5, 1.7}, {2.5, 1.5}, {3.0, 1.4}};
constexpr double kBrightness[] = {0.1, 0.2, 0.3, 0.4, 0.5};
constexpr double kContrast[] = {0.4, 0.3, 0.2, 0.1, 0.05};
constexpr double kElasticAlpha[] = {250 * 0.05, 250 * 0.065, 250 * 0.085, 250 * 0.1, 250 * 0.12};
constexpr double kPixelate[] = {0.6, 0.5, 0.4, 0.3, 0.25};
constexpr int kJpegQuality[] = {25, 18, 15, 10, 7};

cv::Mat to_float(const cv::Mat& bgr) {
  cv::Mat f;
  bgr.convertTo(f, CV_32FC3, 1.0 / 255.0);
  return f;
}

cv::Mat to_u8(const cv::Mat& f) {
  cv::Mat flat = f.reshape(1).clone();
  cv::patchNaNs(flat, 0.0);
  cv::Mat out;
  flat.reshape(f.channels()).convertTo(out, CV_8UC3, 255.0);
  return out;
}

template <typename Fn>
cv::Mat per_element(const cv::Mat& bgr, Fn&& fn) {
  cv::Mat f = to_float(bgr);
  cv::Mat flat = f.reshape(1);
  for (int r = 0; r < flat.rows; ++r) {
    auto* p = flat.ptr<float>(r);
    for (int c = 0; c < flat.cols; ++c) p[c] = std::clamp(fn(p[c]), 0.0f, 1.0f);
  }
  return to_u8(f);
}

cv::Mat shot_noise(const cv::Mat& bgr, double rate, Rng& rng) {
  return per_element(bgr, [&](float v) {
    std::poisson_distribution<int> d(double(v) * rate);
    return float(d(rng) / rate);
  });
}

cv::Mat impulse_noise(const cv::Mat& bgr, double amount, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return per_element(bgr, [&](float v) {
    if (u(rng) >= amount) return v;
    return u(rng) < 0.5 ? 0.0f : 1.0f;
  });
}

cv::Mat gaussian_blur(const cv::Mat& f, double sigma) {
  cv::Mat out;
  cv::GaussianBlur(f, out, cv::Size(0, 0), sigma, sigma, cv::BORDER_REFLECT_101);
  return out;
}

cv::Mat defocus_blur(const cv::Mat& bgr, double radius, double alias) {
  cv::Mat out;
  cv::filter2D(to_float(bgr), out, CV_32F, disk_kernel(radius, alias), cv::Point(-1, -1), 0, cv::BORDER_REFLECT_101);
  return to_u8(out);
}

cv::Mat glass_blur(const cv::Mat& bgr, double sigma, int delta, int iterations, Rng& rng) {
  cv::Mat f = gaussian_blur(to_float(bgr), sigma);
  const int h = f.rows;
  const int w = f.cols;
  std::uniform_int_distribution<int> offset(-delta, std::max(-delta, delta - 1));
  for (int it = 0; it < iterations; ++it) {
    for (int y = h - delta; y > delta; --y) {
      for (int x = w - delta; x > delta; --x) {
        const int dx = offset(rng);
        const int dy = offset(rng);
        const int yy = std::clamp(y + dy, 0, h - 1);
        const int xx = std::clamp(x + dx, 0, w - 1);
        std::swap(f.at<cv::Vec3f>(y, x), f.at<cv::Vec3f>(yy, xx));
      }
    }
  }
  return to_u8(gaussian_blur(f, sigma));
}

cv::Mat apply_motion(const cv::Mat& f, double radius, double sigma, double angle) {
  cv::Mat out;
  cv::filter2D(f, out, CV_32F, motion_kernel(radius, sigma, angle), cv::Point(-1, -1), 0, cv::BORDER_REPLICATE);
  return out;
}

/// Scales about the image center, keeping size.
cv::Mat center_zoom(const cv::Mat& f, double zoom) {
  if (zoom == 1.0) return f.clone();
  const cv::Point2f center(float(f.cols - 1) * 0.5f, float(f.rows - 1) * 0.5f);
  const cv::Mat m = cv::getRotationMatrix2D(center, 0.0, zoom);
  cv::Mat out;
  cv::warpAffine(f, out, m, f.size(), cv::INTER_LINEAR, cv::BORDER_REFLECT_101);
  return out;
}

cv::Mat zoom_blur(const cv::Mat& bgr, const double (&z)[3]) {
  const cv::Mat f = to_float(bgr);
  cv::Mat acc = f.clone();
  const int steps = int(std::lround((z[1] - z[0]) / z[2])) + 1;
  for (int i = 0; i < steps; ++i) acc += center_zoom(f, z[0] + i * z[2]);
  return to_u8(acc / double(steps + 1));
}

cv::Mat snow(const cv::Mat& bgr, const double (&c)[7], double scale, Rng& rng) {
  cv::Mat f = to_float(bgr);
  cv::Mat layer(f.rows, f.cols, CV_32F);
  std::normal_distribution<double> normal(c[0], c[1]);
  for (int r = 0; r < layer.rows; ++r) {
    auto* p = layer.ptr<float>(r);
    for (int x = 0; x < layer.cols; ++x) p[x] = float(normal(rng));
  }
  layer = center_zoom(layer, c[2]);
  cv::threshold(layer, layer, c[3], 0.0, cv::THRESH_TOZERO);
  const double angle = uniform_real(rng, -135.0, -45.0);
  layer = apply_motion(layer, c[4] * scale, c[5] * scale, angle);
  cv::min(layer, 1.0, layer);
  cv::max(layer, 0.0, layer);

  cv::Mat gray;
  cv::cvtColor(f, gray, cv::COLOR_BGR2GRAY);
  gray = gray * 1.5 + 0.5;
  cv::Mat gray3;
  cv::cvtColor(gray, gray3, cv::COLOR_GRAY2BGR);
  cv::Mat lifted = cv::max(f, gray3);
  cv::Mat mixed;
  cv::addWeighted(f, c[6], lifted, 1.0 - c[6], 0.0, mixed);

  cv::Mat flipped;
  cv::flip(layer, flipped, -1);
  cv::Mat snow_total = layer + flipped;
  cv::Mat snow3;
  cv::cvtColor(snow_total, snow3, cv::COLOR_GRAY2BGR);
  mixed += snow3;
  return to_u8(mixed);
}

/// Translucent ice texture: branching crystal strokes over soft plasma haze.
cv::Mat frost_layer(int width, int height, double scale, Rng& rng) {
  cv::Mat mask(height, width, CV_32F, cv::Scalar(0));
  const double diag = std::hypot(width, height);
  const int crystals = std::max(8, int(double(width) * height / 2500.0));
  for (int k = 0; k < crystals; ++k) {
    const cv::Point2d start(uniform_real(rng, 0, width), uniform_real(rng, 0, height));
    const double angle = uniform_real(rng, 0, 2 * std::numbers::pi);
    const double length = uniform_real(rng, 0.02, 0.10) * diag;
    const double intensity = uniform_real(rng, 0.35, 1.0);
    const auto stroke = [&](cv::Point2d from, double a, double len, double value) {
      const cv::Point2d to(from.x + len * std::cos(a), from.y + len * std::sin(a));
      cv::line(mask, from, to, cv::Scalar(value), 1, cv::LINE_AA);
      return to;
    };
    const cv::Point2d end = stroke(start, angle, length, intensity);
    for (int b = 1; b <= 3; ++b) {
      const cv::Point2d mid = start + (end - start) * (b / 4.0);
      const double side = (b % 2 ? 1.0 : -1.0) * std::numbers::pi / 3.0;
      stroke(mid, angle + side, length * 0.35, intensity * 0.8);
    }
  }
  mask = gaussian_blur(mask, 0.6 * scale);
  const int mapsize = 1 << int(std::ceil(std::log2(std::max({width, height, 2}))));
  const cv::Mat haze = plasma_fractal(mapsize, 2.0, rng)(cv::Rect(0, 0, width, height));
  mask = mask + haze * 0.45;
  double lo = 0, hi = 1;
  cv::minMaxLoc(mask, &lo, &hi);
  if (hi > lo) mask = (mask - lo) / (hi - lo);

  std::vector<cv::Mat> channels = {mask * 1.0, mask * 0.95, mask * 0.88};  // B, G, R: bluish white
  cv::Mat out;
  cv::merge(channels, out);
  return out;
}

cv::Mat frost(const cv::Mat& bgr, const double (&c)[2], double scale, Rng& rng) {
  const cv::Mat f = to_float(bgr);
  cv::Mat out;
  cv::addWeighted(f, c[0], frost_layer(f.cols, f.rows, scale, rng), c[1], 0.0, out);
  return to_u8(out);
}

cv::Mat fog(const cv::Mat& bgr, const double (&c)[2], Rng& rng) {
  cv::Mat f = to_float(bgr);
  double max_val = 0;
  cv::minMaxLoc(f.reshape(1), nullptr, &max_val);
  const int mapsize = 1 << int(std::ceil(std::log2(std::max({f.cols, f.rows, 2}))));
  const cv::Mat plasma = plasma_fractal(mapsize, c[1], rng)(cv::Rect(0, 0, f.cols, f.rows));
  cv::Mat plasma3;
  cv::cvtColor(plasma, plasma3, cv::COLOR_GRAY2BGR);
  f += plasma3 * c[0];
  return to_u8(f * (max_val / (max_val + c[0])));
}

cv::Mat brightness(const cv::Mat& bgr, double delta) {
  cv::Mat hsv;
  cv::cvtColor(to_float(bgr), hsv, cv::COLOR_BGR2HSV);
  std::vector<cv::Mat> ch;
  cv::split(hsv, ch);
  ch[2] = cv::min(ch[2] + delta, 1.0);
  cv::merge(ch, hsv);
  cv::Mat out;
  cv::cvtColor(hsv, out, cv::COLOR_HSV2BGR);
  return to_u8(out);
}

cv::Mat contrast(const cv::Mat& bgr, double factor) {
  cv::Mat f = to_float(bgr);
  const cv::Scalar means = cv::mean(f);
  cv::Mat out;
  cv::subtract(f, means, out);
  out = out * factor;
  cv::add(out, means, out);
  return to_u8(out);
}

cv::Mat elastic(const cv::Mat& bgr, double alpha, Rng& rng) {
  const int h = bgr.rows;
  const int w = bgr.cols;
  const double max_d = h * 0.005;
  const double sigma_x = w * 0.01;
  const double sigma_y = h * 0.01;
  const auto field = [&] {
    cv::Mat m(h, w, CV_32F);
    for (int r = 0; r < h; ++r) {
      auto* p = m.ptr<float>(r);
      for (int x = 0; x < w; ++x) p[x] = float(uniform_real(rng, -max_d, max_d));
    }
    const int kx = 2 * int(std::ceil(3 * sigma_x)) + 1;
    const int ky = 2 * int(std::ceil(3 * sigma_y)) + 1;
    cv::GaussianBlur(m, m, cv::Size(kx, ky), sigma_x, sigma_y, cv::BORDER_REFLECT);
    return cv::Mat(m * alpha);
  };
  const cv::Mat dx = field();
  const cv::Mat dy = field();
  cv::Mat map_x(h, w, CV_32F);
  cv::Mat map_y(h, w, CV_32F);
  for (int r = 0; r < h; ++r) {
    for (int x = 0; x < w; ++x) {
      map_x.at<float>(r, x) = float(x) + dx.at<float>(r, x);
      map_y.at<float>(r, x) = float(r) + dy.at<float>(r, x);
    }
  }
  cv::Mat out;
  cv::remap(to_float(bgr), out, map_x, map_y, cv::INTER_LINEAR, cv::BORDER_REFLECT);
  return to_u8(out);
}

cv::Mat pixelate(const cv::Mat& bgr, double factor) {
  const int sw = std::max(1, int(bgr.cols * factor));
  const int sh = std::max(1, int(bgr.rows * factor));
  cv::Mat small;
  cv::Mat out;
  cv::resize(bgr, small, cv::Size(sw, sh), 0, 0, cv::INTER_AREA);
  cv::resize(small, out, bgr.size(), 0, 0, cv::INTER_NEAREST);
  return out;
}

cv::Mat jpeg(const cv::Mat& bgr, int quality) {
  std::vector<uchar> buf;
  cv::imencode(".jpg", bgr, buf, {cv::IMWRITE_JPEG_QUALITY, quality});
  return cv::imdecode(buf, cv::IMREAD_COLOR);
}

}  // namespace

std::string_view to_string(CorruptionKind kind) { return kNames[static_cast<size_t>(kind)]; }

CorruptionKind parse_corruption_kind(std::string_view name) {
  for (size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<CorruptionKind>(i);
  }
  std::string valid;
  for (auto n : kNames) {
    if (!valid.empty()) valid += ", ";
    valid += n;
  }
  throw ConfigError("unknown corruption '" + std::string(name) + "'; valid kinds: " + valid);
}

void CorruptionSpec::validate() const {
  if (static_cast<size_t>(kind) >= kNames.size()) throw ConfigError("invalid corruption kind");
  if (severity < 1 || severity > 5) {
    throw ConfigError("corruption severity must be in 1..5, got " + std::to_string(severity));
  }
}

double spatial_scale(int width, int height) { return std::hypot(width, height) / std::hypot(224.0, 224.0); }

cv::Mat add_gaussian_noise(const cv::Mat& bgr, double sigma, Rng& rng) {
  if (sigma == 0.0) return bgr.clone();
  std::normal_distribution<double> noise(0.0, sigma);
  return per_element(bgr, [&](float v) { return float(v + noise(rng)); });
}

cv::Mat disk_kernel(double radius, double alias_sigma) {
  const int extent = std::max(8, int(std::ceil(radius)));
  const int ksize = radius <= 8 ? 3 : 5;
  cv::Mat k(2 * extent + 1, 2 * extent + 1, CV_32F, cv::Scalar(0));
  for (int y = -extent; y <= extent; ++y) {
    for (int x = -extent; x <= extent; ++x) {
      if (x * x + y * y <= radius * radius) k.at<float>(y + extent, x + extent) = 1.0f;
    }
  }
  k /= cv::sum(k)[0];
  cv::GaussianBlur(k, k, cv::Size(ksize, ksize), alias_sigma);
  k /= cv::sum(k)[0];
  return k;
}

cv::Mat motion_kernel(double radius, double sigma, double angle_deg) {
  const int width = 2 * int(std::lround(radius)) + 1;
  std::vector<double> weights(static_cast<size_t>(width));
  double total = 0;
  for (int i = 0; i < width; ++i) {
    weights[size_t(i)] = std::exp(-double(i) * i / (2.0 * sigma * sigma));
    total += weights[size_t(i)];
  }
  const double rad = angle_deg * std::numbers::pi / 180.0;
  const int anchor = width;
  cv::Mat k(2 * width + 1, 2 * width + 1, CV_32F, cv::Scalar(0));
  for (int i = 0; i < width; ++i) {
    // Image shifted by (dx, dy) contributes with weight i, i.e. a convolution tap at +d.
    const int dy = -int(std::ceil(i * std::sin(rad) - 0.5));
    const int dx = -int(std::ceil(i * std::cos(rad) - 0.5));
    k.at<float>(anchor - dy, anchor - dx) += float(weights[size_t(i)] / total);
  }
  return k;
}

cv::Mat plasma_fractal(int mapsize, double wibble_decay, Rng& rng) {
  // Diamond-square on a torus.
  cv::Mat map(mapsize, mapsize, CV_64F, cv::Scalar(0));
  const auto at = [&](int r, int c) -> double& {
    return map.at<double>(((r % mapsize) + mapsize) % mapsize, ((c % mapsize) + mapsize) % mapsize);
  };
  double wibble = 100.0;
  for (int step = mapsize; step >= 2; step /= 2) {
    const int half = step / 2;
    const auto wibbled = [&](double sum) { return sum / 4.0 + wibble * uniform_real(rng, -wibble, wibble); };
    for (int r = 0; r < mapsize; r += step) {
      for (int c = 0; c < mapsize; c += step) {
        at(r + half, c + half) = wibbled(at(r, c) + at(r + step, c) + at(r, c + step) + at(r + step, c + step));
      }
    }
    for (int r = 0; r < mapsize; r += step) {
      for (int c = 0; c < mapsize; c += step) {
        at(r, c + half) =
            wibbled(at(r + half, c + half) + at(r - half, c + half) + at(r, c) + at(r, c + step));
      }
    }
    for (int r = 0; r < mapsize; r += step) {
      for (int c = 0; c < mapsize; c += step) {
        at(r + half, c) =
            wibbled(at(r + half, c + half) + at(r + half, c - half) + at(r, c) + at(r + step, c));
      }
    }
    wibble /= wibble_decay;
  }
  double lo = 0, hi = 0;
  cv::minMaxLoc(map, &lo, &hi);
  map -= lo;
  if (hi > lo) map /= (hi - lo);
  cv::Mat out;
  map.convertTo(out, CV_32F);
  return out;
}

cv::Mat corrupt_pixels(const cv::Mat& bgr, const CorruptionSpec& spec, Rng& rng) {
  spec.validate();
  if (bgr.type() != CV_8UC3) throw InvariantError("corruption input must be CV_8UC3");
  const size_t s = size_t(spec.severity - 1);
  const double scale = spatial_scale(bgr.cols, bgr.rows);
  switch (spec.kind) {
    case CorruptionKind::kGaussianNoise:
      return add_gaussian_noise(bgr, kGaussianSigma[s], rng);
    case CorruptionKind::kShotNoise:
      return shot_noise(bgr, kShotRate[s], rng);
    case CorruptionKind::kImpulseNoise:
      return impulse_noise(bgr, kImpulseAmount[s], rng);
    case CorruptionKind::kDefocusBlur:
      return defocus_blur(bgr, kDefocus[s][0] * scale, kDefocus[s][1] * scale);
    case CorruptionKind::kGlassBlur:
      return glass_blur(bgr, kGlass[s][0] * scale, std::max(1, int(std::lround(kGlass[s][1] * scale))),
                        int(kGlass[s][2]), rng);
    case CorruptionKind::kMotionBlur: {
      const double angle = uniform_real(rng, -45.0, 45.0);
      return to_u8(apply_motion(to_float(bgr), kMotion[s][0] * scale, kMotion[s][1] * scale, angle));
    }
    case CorruptionKind::kZoomBlur:
      return zoom_blur(bgr, kZoom[s]);
    case CorruptionKind::kSnow:
      return snow(bgr, kSnow[s], scale, rng);
    case CorruptionKind::kFrost:
      return frost(bgr, kFrost[s], scale, rng);
    case CorruptionKind::kFog:
      return fog(bgr, kFog[s], rng);
    case CorruptionKind::kBrightness:
      return brightness(bgr, kBrightness[s]);
    case CorruptionKind::kContrast:
      return contrast(bgr, kContrast[s]);
    case CorruptionKind::kElasticTransform:
      return elastic(bgr, kElasticAlpha[s], rng);
    case CorruptionKind::kPixelate:
      return pixelate(bgr, kPixelate[s] / std::max(1.0, scale));
    case CorruptionKind::kJpegCompression:
      return jpeg(bgr, kJpegQuality[s]);
  }
  throw InvariantError("unhandled corruption kind");
}

ImageRecord corrupt_image(const ImageRecord& record, const CorruptionSpec& spec, Rng& rng) {
  ImageRecord out = record;
  out.set_pixels(corrupt_pixels(record.pixels(), spec, rng));
  return out;
}

fs::path corruption_cell_dir(const fs::path& root, const CorruptionSpec& spec) {
  return root / std::string(to_string(spec.kind)) / std::to_string(spec.severity);
}

Rng corruption_rng(uint64_t seed, const CorruptionSpec& spec, size_t index) {
  return Rng(derive_seed(seed, {static_cast<uint64_t>(Stream::kCorruption), static_cast<uint64_t>(spec.kind),
                                static_cast<uint64_t>(spec.severity), index}));
}

std::vector<CorruptionSpec> corrupt_dataset(const Dataset& dataset, const CorruptionSuiteOptions& options,
                                            const fs::path& out_dir) {
  std::vector<CorruptionSpec> cells;
  for (auto kind : options.kinds) {
    for (int severity : options.severities) {
      CorruptionSpec spec{kind, severity};
      spec.validate();
      cells.push_back(spec);
    }
  }
  for (const auto& spec : cells) save_annotations(dataset, corruption_cell_dir(out_dir, spec));

  const size_t n = dataset.images.size();
  parallel_for(cells.size() * n, options.workers, [&](size_t k) {
    const CorruptionSpec& spec = cells[k / n];
    const size_t index = k % n;
    const ImageRecord& rec = dataset.images[index];
    try {
      Rng rng = corruption_rng(options.seed, spec, index);
      ImageRecord out = corrupt_image(rec, spec, rng);
      write_sample_image(out, corruption_cell_dir(out_dir, spec));
    } catch (const Error& e) {
      throw Error(std::string(to_string(spec.kind)) + "/" + std::to_string(spec.severity) + " image " +
                  std::to_string(rec.id) + ": " + e.what());
    }
  });
  return cells;
}

}  // namespace colmix
