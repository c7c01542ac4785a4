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

#ifndef COLMIX_TOOLS_COMMANDS_HPP_
#define COLMIX_TOOLS_COMMANDS_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace colmix::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kPasteLogFile = "paste_log.jsonl";
inline constexpr const char* kResolvedConfigFile = "config.txt";

using Settings = std::vector<std::pair<std::string, std::string>>;

/// Input dataset: either `dir` (holding annotations.json and images/) or an
/// explicit annotation file plus image root.
struct DatasetInput {
  std::optional<std::filesystem::path> dir;
  std::optional<std::filesystem::path> annotations;
  std::optional<std::filesystem::path> images;

  std::filesystem::path annotation_file() const;
  std::filesystem::path image_root() const;
};

struct CommonOptions {
  std::optional<std::filesystem::path> config_file;
  Settings overrides;  // applied after the config file, in order
  std::optional<uint64_t> seed;
  std::optional<size_t> epochs;
  size_t workers = 1;
  std::vector<std::string> argv;  // recorded verbatim in the manifest
};

struct AugmentOptions {
  std::string mode = "collage";  // collage | mosaic | bbox-paste | pixmix | colmix-a
  DatasetInput input;
  std::filesystem::path out;
  CommonOptions common;
};

struct StageOptions {
  DatasetInput input;
  std::filesystem::path out;
  CommonOptions common;
};

struct CorruptOptions {
  DatasetInput input;
  std::filesystem::path out;
  std::vector<std::string> kinds;  // empty: all 15
  std::vector<int> severities;     // empty: 1..5
  uint64_t seed = 0;
  size_t workers = 1;
  std::vector<std::string> argv;
};

struct EvalOptions {
  std::filesystem::path ground_truth;
  std::filesystem::path detections;
  /// Root of `<kind>/<severity>/detections.json` (and optionally annotations.json) cells.
  std::optional<std::filesystem::path> grid_root;
  std::optional<std::filesystem::path> out;
  std::vector<std::string> argv;
};

struct StatsOptions {
  DatasetInput input;
  std::optional<std::filesystem::path> out;
  size_t bins = 20;
  std::vector<std::string> argv;
};

struct PreviewOptions {
  DatasetInput input;
  std::filesystem::path out;
  size_t count = 4;
  uint64_t seed = 0;
  std::vector<std::string> argv;
};

// Each command returns the process exit status: 0 on success, 1 on any
// failure (reported on `err`).
int cmd_augment(const AugmentOptions& options, std::ostream& out, std::ostream& err);
int cmd_stage(const StageOptions& options, std::ostream& out, std::ostream& err);
int cmd_corrupt(const CorruptOptions& options, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalOptions& options, std::ostream& out, std::ostream& err);
int cmd_stats(const StatsOptions& options, std::ostream& out, std::ostream& err);
int cmd_preview(const PreviewOptions& options, std::ostream& out, std::ostream& err);

}  // namespace colmix::cli

#endif  // COLMIX_TOOLS_COMMANDS_HPP_
