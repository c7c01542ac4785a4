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

#ifndef COLMIX_RANDOM_HPP_
#define COLMIX_RANDOM_HPP_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace colmix {

using Rng = std::mt19937_64;

/// Stream identifiers so that pipelines sharing (seed, epoch, index) draw
/// from unrelated generators.
enum class Stream : uint64_t {
  kCollage = 0,
  kPixMix = 1,
  kCorruption = 2,
  kMosaic = 3,
  kBBoxPaste = 4,
  kPreview = 5,
};

/// splitmix64 finalizer.
constexpr uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr uint64_t derive_seed(uint64_t seed, std::initializer_list<uint64_t> parts) {
  uint64_t h = mix64(seed);
  for (uint64_t p : parts) h = mix64(h ^ mix64(p));
  return h;
}

/// Generator for one output sample; depends only on its coordinates, never on scheduling.
inline Rng sample_rng(uint64_t seed, Stream stream, uint64_t epoch, uint64_t index) {
  return Rng(derive_seed(seed, {static_cast<uint64_t>(stream), epoch, index}));
}

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline double uniform_real(Rng& rng, double lo, double hi) {
  if (lo == hi) return lo;
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double sample_beta(Rng& rng, double a, double b) {
  const double x = std::gamma_distribution<double>(a, 1.0)(rng);
  const double y = std::gamma_distribution<double>(b, 1.0)(rng);
  return x + y > 0.0 ? x / (x + y) : 0.5;
}

}  // namespace colmix

#endif  // COLMIX_RANDOM_HPP_
