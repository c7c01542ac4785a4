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

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "colmix/parallel.hpp"
#include "commands.hpp"

namespace {

using colmix::cli::CommonOptions;
using colmix::cli::DatasetInput;

void add_input(CLI::App* app, DatasetInput& input) {
  app->add_option("--in", input.dir, "Dataset directory holding annotations.json and images/");
  app->add_option("--annotations", input.annotations, "COCO annotation file (overrides --in)");
  app->add_option("--images", input.images, "Image root directory (overrides --in)");
}

/// Flag name and the config key it sets.
struct KeyFlag {
  const char* flag;
  const char* key;
  const char* help;
};

constexpr KeyFlag kKeyFlags[] = {
    {"--profile", "profile", "Hyperparameter profile: rareplanes or xview39"},
    {"--target-density", "TargetDensity", "Target density range 'lo,hi'"},
    {"--min-size", "MinSize", "Corner grid spacing in pixels"},
    {"--max-dilation", "MaxDilation", "Largest expansion per side"},
    {"--max-expansions", "MaxExpansions", "Expansion attempts per corner"},
    {"--min-step", "MinStep", "Smallest expansion step"},
    {"--max-step", "MaxStep", "Largest expansion step"},
    {"--occlusion-tol", "OcclusionTol", "Occluded pixels tolerated inside a block"},
    {"--bbox-threshold", "BBoxThreshold", "Percent of a source box that must be copied to import it"},
    {"--base-mode", "base_mode", "existing-image or blank-canvas"},
    {"--canvas-fill", "canvas_fill", "Gray level of blank canvases"},
    {"--pixmix-rounds", "pixmix_rounds", "Maximum PixMix rounds"},
    {"--pixmix-beta", "pixmix_beta", "PixMix blend strength"},
    {"--pixmix-ops", "pixmix_ops", "PixMix operations: additive, multiplicative or both (comma separated)"},
    {"--mixers", "mixers", "Directory of fractal mixer images"},
    {"--mosaic-grid", "mosaic_grid", "Mosaic grid 'CxR'"},
    {"--bbox-paste-count", "bbox_paste_count", "Chips pasted per image in bbox-paste mode"},
};

void add_common(CLI::App* app, CommonOptions& common) {
  app->add_option("--config", common.config_file, "Key/value configuration file");
  for (const auto& kf : kKeyFlags) {
    const std::string key = kf.key;
    app->add_option_function<std::string>(
        kf.flag, [&common, key](const std::string& v) { common.overrides.emplace_back(key, v); }, kf.help);
  }
  app->add_option("--seed", common.seed, "Master seed");
  app->add_option("--epochs", common.epochs, "Passes over the input dataset");
  app->add_option("--workers", common.workers, "Worker threads (default: COLMIX_WORKERS or all cores)");
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  const size_t workers = colmix::default_workers();

  CLI::App app{"ColMix: collage pasting and PixMix augmentation for object detection"};
  app.require_subcommand(1);
  app.set_version_flag("--version", colmix::cli::kVersion);

  colmix::cli::AugmentOptions augment;
  augment.common.workers = workers;
  auto* augment_cmd = app.add_subcommand("augment", "Generate an augmented dataset");
  augment_cmd->add_option("--mode", augment.mode, "collage, mosaic, bbox-paste, pixmix or colmix-a")
      ->check(CLI::IsMember({"collage", "mosaic", "bbox-paste", "pixmix", "colmix-a"}));
  add_input(augment_cmd, augment.input);
  augment_cmd->add_option("--out", augment.out, "Output directory")->required();
  add_common(augment_cmd, augment.common);

  colmix::cli::StageOptions stage;
  stage.common.workers = workers;
  auto* stage_cmd = app.add_subcommand("stage", "Write collage pre-training and PixMix fine-tuning datasets");
  add_input(stage_cmd, stage.input);
  stage_cmd->add_option("--out", stage.out, "Output directory")->required();
  add_common(stage_cmd, stage.common);

  colmix::cli::CorruptOptions corrupt;
  corrupt.workers = workers;
  auto* corrupt_cmd = app.add_subcommand("corrupt", "Write corrupted copies of a dataset");
  add_input(corrupt_cmd, corrupt.input);
  corrupt_cmd->add_option("--out", corrupt.out, "Output root")->required();
  corrupt_cmd->add_option("--kinds", corrupt.kinds, "Corruption kinds (default: all)")->delimiter(',');
  corrupt_cmd->add_option("--severities", corrupt.severities, "Severities (default: 1..5)")
      ->delimiter(',')
      ->check(CLI::Range(1, 5));
  corrupt_cmd->add_option("--seed", corrupt.seed, "Master seed");
  corrupt_cmd->add_option("--workers", corrupt.workers, "Worker threads");

  colmix::cli::EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "COCO mAP and corruption mAPc");
  eval_cmd->add_option("--gt", eval.ground_truth, "Ground-truth annotation file")->required();
  eval_cmd->add_option("--detections", eval.detections, "Detections on the clean set")->required();
  eval_cmd->add_option("--grid", eval.grid_root, "Root of <kind>/<severity>/detections.json cells");
  eval_cmd->add_option("--out", eval.out, "Directory for report.json and report.csv");

  colmix::cli::StatsOptions stats;
  auto* stats_cmd = app.add_subcommand("stats", "Object density statistics");
  add_input(stats_cmd, stats.input);
  stats_cmd->add_option("--out", stats.out, "JSON output file");
  stats_cmd->add_option("--bins", stats.bins, "Histogram bins")->check(CLI::PositiveNumber);

  colmix::cli::PreviewOptions preview;
  auto* preview_cmd = app.add_subcommand("preview", "Draw boxes on a few images");
  add_input(preview_cmd, preview.input);
  preview_cmd->add_option("--out", preview.out, "Output directory")->required();
  preview_cmd->add_option("--count", preview.count, "Images to draw");
  preview_cmd->add_option("--seed", preview.seed, "Selection seed");

  CLI11_PARSE(app, argc, argv);

  if (augment_cmd->parsed()) {
    augment.common.argv = args;
    return colmix::cli::cmd_augment(augment, std::cout, std::cerr);
  }
  if (stage_cmd->parsed()) {
    stage.common.argv = args;
    return colmix::cli::cmd_stage(stage, std::cout, std::cerr);
  }
  if (corrupt_cmd->parsed()) {
    corrupt.argv = args;
    return colmix::cli::cmd_corrupt(corrupt, std::cout, std::cerr);
  }
  if (eval_cmd->parsed()) {
    eval.argv = args;
    return colmix::cli::cmd_eval(eval, std::cout, std::cerr);
  }
  if (stats_cmd->parsed()) {
    stats.argv = args;
    return colmix::cli::cmd_stats(stats, std::cout, std::cerr);
  }
  preview.argv = args;
  return colmix::cli::cmd_preview(preview, std::cout, std::cerr);
}
