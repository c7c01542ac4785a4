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

#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numeric>
#include <ostream>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "colmix/collage.hpp"
#include "colmix/config.hpp"
#include "colmix/corruption.hpp"
#include "colmix/dataset.hpp"
#include "colmix/error.hpp"
#include "colmix/metrics.hpp"
#include "colmix/parallel.hpp"
#include "colmix/pixmix.hpp"
#include "colmix/random.hpp"
#include "json.hpp"

namespace colmix::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

fs::path DatasetInput::annotation_file() const {
  if (annotations) return *annotations;
  if (dir) return *dir / kAnnotationFile;
  throw ConfigError("no input dataset given (use --in or --annotations/--images)");
}

fs::path DatasetInput::image_root() const {
  if (images) return *images;
  if (dir) return *dir / kImageDir;
  if (annotations) return annotations->parent_path() / kImageDir;
  throw ConfigError("no input dataset given (use --in or --annotations/--images)");
}

namespace {

using Clock = std::chrono::steady_clock;

/// Run record written next to every output tree.
class Manifest {
 public:
  Manifest(const std::string& command, const std::vector<std::string>& argv) : start_(Clock::now()) {
    root_["tool"] = "colmix";
    root_["version"] = kVersion;
    root_["command"] = command;
    root_["argv"] = argv;
  }

  ojson& operator[](const char* key) { return root_[key]; }
  void counter(const std::string& name, int64_t value) { root_["counters"][name] = value; }
  void mark(const std::string& stage) {
    const auto now = Clock::now();
    root_["timing_seconds"][stage] = std::chrono::duration<double>(now - last_).count();
    last_ = now;
  }

  void write(const fs::path& dir) {
    root_["timing_seconds"]["total"] = std::chrono::duration<double>(Clock::now() - start_).count();
    fs::create_directories(dir);
    std::ofstream out(dir / kManifestFile, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write manifest in " + dir.string());
    out << root_.dump(1) << '\n';
  }

 private:
  ojson root_;
  Clock::time_point start_;
  Clock::time_point last_ = Clock::now();
};

ojson config_json(const RunConfig& config) {
  ojson j = ojson::object();
  for (const auto& [k, v] : describe(config)) j[k] = v;
  return j;
}

RunConfig resolve_config(const CommonOptions& common) {
  Settings settings;
  if (common.config_file) settings = read_key_values(*common.config_file);
  settings.insert(settings.end(), common.overrides.begin(), common.overrides.end());
  RunConfig config = run_config_from(settings);
  if (common.seed) config.set_seed(*common.seed);
  if (common.epochs) config.epochs = *common.epochs;
  config.validate();
  return config;
}

Dataset load_input(const DatasetInput& input, std::ostream& err) {
  LoadStats stats;
  Dataset ds = load_dataset(input.annotation_file(), input.image_root(), &stats);
  if (stats.dropped_annotations > 0) {
    err << "warning: dropped " << stats.dropped_annotations << " zero-area annotation(s)\n";
  }
  if (stats.clipped_annotations > 0) {
    err << "warning: clipped " << stats.clipped_annotations << " annotation(s) to image bounds\n";
  }
  return ds;
}

ojson input_json(const DatasetInput& input) {
  return {{"annotations", input.annotation_file().string()}, {"images", input.image_root().string()}};
}

MixerSet load_mixers_for(const RunConfig& config, std::ostream& err) {
  if (!config.mixer_dir) throw ConfigError("this mode needs a mixer directory (config key 'mixers' or --mixers)");
  size_t skipped = 0;
  MixerSet mixers = MixerSet::load(*config.mixer_dir, &skipped);
  if (skipped > 0) err << "warning: skipped " << skipped << " undecodable mixer file(s)\n";
  return mixers;
}

/// One output per (epoch, index), produced by `make` and written by its worker.
Dataset generate_samples(const Dataset& ds, size_t epochs, size_t workers, const fs::path& out,
                         const std::function<ImageRecord(size_t, size_t, ImageId)>& make) {
  const size_t n = ds.images.size();
  Dataset result;
  result.categories = ds.categories;
  result.root = out / kImageDir;
  result.images.resize(epochs * n);
  parallel_for(epochs * n, workers, [&](size_t k) {
    const size_t epoch = k / n;
    const size_t index = k % n;
    try {
      ImageRecord rec = make(epoch, index, sample_image_id(epoch, index, n));
      rec.file_name = sample_file_name(epoch, index);
      write_sample_image(rec, out);
      result.images[k] = std::move(rec);
    } catch (const Error& e) {
      throw Error("sample (epoch " + std::to_string(epoch) + ", index " + std::to_string(index) + "): " + e.what());
    }
  });
  return result;
}

void count_collage(Manifest& manifest, const GeneratedDataset& g) {
  int64_t pastes = 0;
  int64_t fallbacks = 0;
  int64_t reached = 0;
  int64_t exhausted = 0;
  int64_t stalled = 0;
  for (const auto& s : g.samples) {
    pastes += int64_t(s.log.entries.size());
    for (const auto& e : s.log.entries) fallbacks += e.fallback;
    reached += s.termination == Termination::kReachedTarget;
    exhausted += s.termination == Termination::kCornersExhausted;
    stalled += s.termination == Termination::kStalled;
  }
  manifest.counter("samples", int64_t(g.samples.size()));
  manifest.counter("pastes", pastes);
  manifest.counter("fallback_pastes", fallbacks);
  manifest.counter("reached_target", reached);
  manifest.counter("corners_exhausted", exhausted);
  manifest.counter("stalled", stalled);
}

void write_resolved_config(const RunConfig& config, const fs::path& dir) {
  std::ofstream out(dir / kResolvedConfigFile, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + (dir / kResolvedConfigFile).string());
  out << render_config(config);
}

int report_failure(std::ostream& err, const std::exception& e) {
  err << "error: " << e.what() << '\n';
  return 1;
}

}  // namespace

int cmd_augment(const AugmentOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig config = resolve_config(options.common);
    Manifest manifest("augment", options.common.argv);
    manifest["mode"] = options.mode;
    manifest["config"] = config_json(config);
    manifest["seed"] = config.seed();
    manifest["workers"] = options.common.workers;
    manifest["input"] = input_json(options.input);
    manifest["output"] = options.out.string();

    const Dataset ds = load_input(options.input, err);
    manifest.mark("load");
    fs::create_directories(options.out);

    GenerateOptions gen;
    gen.epochs = config.epochs;
    gen.workers = options.common.workers;
    gen.out_dir = options.out;

    Dataset result;
    if (options.mode == "collage" || options.mode == "colmix-a") {
      GeneratedDataset g;
      if (options.mode == "collage") {
        g = generate_collage_dataset(ds, config.collage, gen);
      } else {
        const MixerSet mixers = load_mixers_for(config, err);
        manifest["mixers"] = mixers.size();
        g = colmix_a_pipeline(ds, config.collage, config.pixmix, mixers, gen);
      }
      write_paste_log(g.samples, options.out / kPasteLogFile);
      count_collage(manifest, g);
      result = std::move(g.dataset);
    } else if (options.mode == "pixmix") {
      const MixerSet mixers = load_mixers_for(config, err);
      manifest["mixers"] = mixers.size();
      result = pixmix_dataset(ds, mixers, config.pixmix, gen);
    } else if (options.mode == "mosaic") {
      result = generate_samples(ds, config.epochs, gen.workers, options.out, [&](size_t e, size_t i, ImageId id) {
        Rng rng = sample_rng(config.seed(), Stream::kMosaic, e, i);
        return mosaic_augment(ds, config.mosaic_cols, config.mosaic_rows, config.collage.bbox_threshold, rng, id)
            .image;
      });
    } else if (options.mode == "bbox-paste") {
      std::vector<size_t> failed(config.epochs * ds.images.size(), 0);
      result = generate_samples(ds, config.epochs, gen.workers, options.out, [&](size_t e, size_t i, ImageId id) {
        Rng rng = sample_rng(config.seed(), Stream::kBBoxPaste, e, i);
        BBoxPasteResult r = bbox_paste_augment(collage_base(ds, i, config.collage, id), ds, config.bbox_paste_count, rng);
        failed[e * ds.images.size() + i] = r.failed;
        return std::move(r.image);
      });
      const auto total_failed = std::accumulate(failed.begin(), failed.end(), size_t{0});
      if (total_failed > 0) err << "warning: " << total_failed << " chip(s) found no free position\n";
      manifest.counter("failed_pastes", int64_t(total_failed));
    } else {
      throw ConfigError("unknown augment mode '" + options.mode +
                        "' (expected collage, mosaic, bbox-paste, pixmix or colmix-a)");
    }
    manifest.mark("generate");

    save_annotations(result, options.out);
    write_resolved_config(config, options.out);
    manifest.counter("images", int64_t(result.images.size()));
    manifest.counter("annotations", int64_t(result.annotation_count()));
    manifest.write(options.out);
    out << "augment(" << options.mode << "): wrote " << result.images.size() << " images, "
        << result.annotation_count() << " annotations to " << options.out.string() << '\n';
    return 0;
  } catch (const std::exception& e) {
    return report_failure(err, e);
  }
}

int cmd_stage(const StageOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig config = resolve_config(options.common);
    Manifest manifest("stage", options.common.argv);
    manifest["config"] = config_json(config);
    manifest["seed"] = config.seed();
    manifest["stage_seeds"] = {{kStage1Dir, config.collage.seed}, {kStage2Dir, config.pixmix.seed}};
    manifest["workers"] = options.common.workers;
    manifest["input"] = input_json(options.input);
    manifest["output"] = options.out.string();

    const Dataset ds = load_input(options.input, err);
    const MixerSet mixers = load_mixers_for(config, err);
    manifest.mark("load");

    GenerateOptions gen;
    gen.epochs = config.epochs;
    gen.workers = options.common.workers;
    gen.out_dir = options.out;
    const StagedDatasets staged = colmix_b_stage(ds, config.collage, config.pixmix, mixers, gen);
    manifest.mark("generate");

    count_collage(manifest, staged.stage1);
    manifest.counter("stage2_images", int64_t(staged.stage2.images.size()));
    write_resolved_config(config, options.out);
    manifest.write(options.out);
    out << "stage: wrote " << staged.stage1.dataset.images.size() << " collage images to "
        << (options.out / kStage1Dir).string() << " and " << staged.stage2.images.size() << " PixMix images to "
        << (options.out / kStage2Dir).string() << '\n';
    return 0;
  } catch (const std::exception& e) {
    return report_failure(err, e);
  }
}

int cmd_corrupt(const CorruptOptions& options, std::ostream& out, std::ostream& err) {
  try {
    CorruptionSuiteOptions suite;
    if (!options.kinds.empty()) {
      suite.kinds.clear();
      for (const auto& k : options.kinds) suite.kinds.push_back(parse_corruption_kind(k));
    }
    if (!options.severities.empty()) suite.severities = options.severities;
    suite.seed = options.seed;
    suite.workers = options.workers;

    Manifest manifest("corrupt", options.argv);
    manifest["seed"] = options.seed;
    manifest["workers"] = options.workers;
    manifest["input"] = input_json(options.input);
    manifest["output"] = options.out.string();
    ojson kinds = ojson::array();
    for (auto k : suite.kinds) kinds.push_back(std::string(to_string(k)));
    manifest["kinds"] = kinds;
    manifest["severities"] = suite.severities;

    const Dataset ds = load_input(options.input, err);
    manifest.mark("load");
    const auto cells = corrupt_dataset(ds, suite, options.out);
    manifest.mark("corrupt");
    manifest.counter("datasets", int64_t(cells.size()));
    manifest.counter("images", int64_t(cells.size() * ds.images.size()));
    manifest.write(options.out);
    out << "corrupt: wrote " << cells.size() << " datasets x " << ds.images.size() << " images to "
        << options.out.string() << '\n';
    return 0;
  } catch (const std::exception& e) {
    return report_failure(err, e);
  }
}

int cmd_eval(const EvalOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const Dataset gt = load_dataset(options.ground_truth, options.ground_truth.parent_path() / kImageDir);
    const auto detections = load_detections(options.detections);
    EvalReport report = map_coco(detections, gt);

    if (options.grid_root) {
      for (auto kind : kAllCorruptions) {
        for (int severity : kAllSeverities) {
          const fs::path cell = corruption_cell_dir(*options.grid_root, CorruptionSpec{kind, severity});
          const fs::path det_file = cell / "detections.json";
          if (!fs::exists(det_file)) {
            throw ValidationError("incomplete corruption grid: missing cell " + std::string(to_string(kind)) + "/" +
                                  std::to_string(severity) + " (" + det_file.string() + ")");
          }
          const fs::path cell_gt = cell / kAnnotationFile;
          const EvalReport cell_report =
              fs::exists(cell_gt) ? map_coco(load_detections(det_file), load_dataset(cell_gt, cell / kImageDir))
                                  : map_coco(load_detections(det_file), gt);
          if (!cell_report.map) {
            throw ValidationError("cell " + std::string(to_string(kind)) + "/" + std::to_string(severity) +
                                  " has no ground truth");
          }
          report.grid[{kind, severity}] = *cell_report.map;
        }
      }
      report.mapc = mapc(report.grid);
    }

    if (options.out) {
      fs::create_directories(*options.out);
      write_report_json(report, gt.categories, *options.out / "report.json");
      write_report_csv(report, *options.out / "report.csv");
    }
    out.precision(6);
    if (report.map) {
      out << "mAP " << *report.map << '\n';
    } else {
      out << "mAP undefined (no ground truth)\n";
    }
    for (const auto& [cat, ap] : report.per_class_ap) out << "  class " << cat << " AP " << ap << '\n';
    if (report.mapc) out << "mAPc " << *report.mapc << '\n';
    return 0;
  } catch (const std::exception& e) {
    return report_failure(err, e);
  }
}

int cmd_stats(const StatsOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const Dataset ds = load_input(options.input, err);
    const DensityStats stats = density_stats(ds, options.bins);
    out << "images " << ds.images.size() << ", annotations " << ds.annotation_count() << '\n';
    if (stats.mean) {
      out << "mean density " << *stats.mean << ", median " << *stats.median << '\n';
    } else {
      out << "mean density undefined (empty dataset)\n";
    }
    const double width = 1.0 / double(stats.histogram.size());
    for (size_t b = 0; b < stats.histogram.size(); ++b) {
      if (stats.histogram[b] == 0) continue;
      out << "  [" << b * width << ", " << (b + 1) * width << ") " << stats.histogram[b] << '\n';
    }
    if (options.out) {
      ojson j;
      j["images"] = ds.images.size();
      j["annotations"] = ds.annotation_count();
      j["mean"] = stats.mean ? ojson(*stats.mean) : ojson(nullptr);
      j["median"] = stats.median ? ojson(*stats.median) : ojson(nullptr);
      j["bin_width"] = width;
      j["histogram"] = stats.histogram;
      ojson per_image = ojson::array();
      for (size_t i = 0; i < ds.images.size(); ++i) {
        per_image.push_back({{"image_id", ds.images[i].id}, {"density", stats.densities[i]}});
      }
      j["densities"] = per_image;
      if (options.out->has_parent_path()) fs::create_directories(options.out->parent_path());
      std::ofstream f(*options.out, std::ios::binary | std::ios::trunc);
      if (!f) throw IoError("cannot write " + options.out->string());
      f << j.dump(1) << '\n';
    }
    return 0;
  } catch (const std::exception& e) {
    return report_failure(err, e);
  }
}

int cmd_preview(const PreviewOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const Dataset ds = load_input(options.input, err);
    std::vector<size_t> order(ds.images.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_seed(options.seed, {static_cast<uint64_t>(Stream::kPreview)}));
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(std::min(order.size(), options.count));

    fs::create_directories(options.out);
    for (size_t k = 0; k < order.size(); ++k) {
      const ImageRecord& rec = ds.images[order[k]];
      cv::Mat canvas = rec.pixels().clone();
      for (const auto& a : rec.annotations) {
        const uint64_t h = mix64(static_cast<uint64_t>(a.category));
        const cv::Scalar color(64 + (h & 0xbf), 64 + ((h >> 8) & 0xbf), 64 + ((h >> 16) & 0xbf));
        cv::rectangle(canvas, cv::Rect(a.box.x, a.box.y, a.box.w, a.box.h), color, 2);
      }
      const std::string label = "id " + std::to_string(rec.id) + "  density " +
                                std::to_string(object_density(rec)).substr(0, 6);
      cv::putText(canvas, label, cv::Point(6, 18), cv::FONT_HERSHEY_SIMPLEX, 0.5, cv::Scalar(0, 0, 0), 3);
      cv::putText(canvas, label, cv::Point(6, 18), cv::FONT_HERSHEY_SIMPLEX, 0.5, cv::Scalar(255, 255, 255), 1);
      char name[32];
      std::snprintf(name, sizeof(name), "preview_%03zu.png", k);
      if (!cv::imwrite((options.out / name).string(), canvas)) throw IoError("cannot write preview " + std::string(name));
    }
    out << "preview: wrote " << order.size() << " image(s) to " << options.out.string() << '\n';
    return 0;
  } catch (const std::exception& e) {
    return report_failure(err, e);
  }
}

}  // namespace colmix::cli
