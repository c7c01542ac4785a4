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

#ifndef COLMIX_CONFIG_HPP_
#define COLMIX_CONFIG_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "colmix/collage.hpp"
#include "colmix/pixmix.hpp"

namespace colmix {

/// Everything a generation run reads from its key-value config file.
///
/// File format: one `Key = value` per line, `#` starts a comment. Keys are
/// matched ignoring case, '_' and '-', so `MinSize`, `min_size` and
/// `min-size` are the same key. Recognized keys:
///
///   profile                  rareplanes | xview39 (applied before the other keys)
///   TargetDensity            "lo, hi"   (or TargetDensityLo / TargetDensityHi)
///   MinSize MaxDilation MaxExpansions MinStep MaxStep OcclusionTol BBoxThreshold
///   base_mode                existing-image | blank-canvas
///   canvas_fill              0..255
///   seed epochs
///   pixmix_rounds pixmix_beta pixmix_ops ("additive,multiplicative") mixers
///   mosaic_grid              "COLSxROWS", each in 1..4
///   bbox_paste_count
struct RunConfig {
  CollageConfig collage = CollageConfig::rareplanes();
  PixMixConfig pixmix;
  size_t epochs = 1;
  std::optional<std::filesystem::path> mixer_dir;
  int mosaic_cols = 2;
  int mosaic_rows = 2;
  size_t bbox_paste_count = 5;

  uint64_t seed() const { return collage.seed; }
  /// Sets the single seed that every generator stream derives from.
  void set_seed(uint64_t seed);
  void validate() const;
};

std::string normalize_key(std::string_view key);

/// Parses `Key = value` lines in file order. Throws ParseError with the line number.
std::vector<std::pair<std::string, std::string>> read_key_values(const std::filesystem::path& file);
std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view text, const std::string& origin);

/// Throws ConfigError on an unknown key or malformed value.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Profile first, then remaining keys in order.
RunConfig load_run_config(const std::filesystem::path& file);
RunConfig run_config_from(const std::vector<std::pair<std::string, std::string>>& settings);

/// Canonical key-value form; `load_run_config` of this text reproduces `config`.
std::vector<std::pair<std::string, std::string>> describe(const RunConfig& config);
std::string render_config(const RunConfig& config);

}  // namespace colmix

#endif  // COLMIX_CONFIG_HPP_
