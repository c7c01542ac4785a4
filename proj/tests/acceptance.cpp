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

// Acceptance suite: one PASS/FAIL line per primary criterion. Exit status is
// the number of failed criteria.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "colmix/collage.hpp"
#include "colmix/corruption.hpp"
#include "colmix/dataset.hpp"
#include "colmix/error.hpp"
#include "colmix/metrics.hpp"
#include "colmix/pixmix.hpp"
#include "commands.hpp"
#include "json.hpp"
#include "support/coco_oracle.hpp"
#include "support/support.hpp"

namespace {

namespace fs = std::filesystem;
using namespace colmix;
using colmix::testing::TempDir;

struct Verdict {
  bool pass = true;
  std::string detail;
};

int g_failures = 0;

void report(const std::string& name, const std::function<Verdict()>& check) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = check();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char timing[32];
  std::snprintf(timing, sizeof(timing), "%.1fs", secs);
  std::cout << (v.pass ? "PASS" : "FAIL") << "  " << name << "  (" << timing << ")  " << v.detail << std::endl;
  g_failures += !v.pass;
}

std::string str(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

/// Shared input for the density and audit criteria.
struct DensityRun {
  fs::path corpus;
  fs::path out;
  double max_natural_density = 0;
  double seconds = 0;
  int exit_code = 0;
  std::string err;
};

DensityRun run_density_generation(const TempDir& work) {
  DensityRun run;
  run.corpus = work / "sparse";
  run.out = work / "collage";
  const Dataset corpus = testing::write_synthetic({.count = 50, .width = 512, .height = 512, .seed = 101},
                                                  run.corpus);
  for (const auto& rec : corpus.images) {
    run.max_natural_density = std::max(run.max_natural_density, testing::raster_density(rec));
  }
  cli::AugmentOptions o;
  o.mode = "collage";
  o.input.dir = run.corpus;
  o.out = run.out;
  o.common.overrides = {{"profile", "rareplanes"}};
  o.common.seed = 2024;
  o.common.epochs = 2;
  o.common.workers = 1;
  std::ostringstream out;
  std::ostringstream err;
  const auto start = std::chrono::steady_clock::now();
  run.exit_code = cli::cmd_augment(o, out, err);
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  run.err = err.str();
  return run;
}

Verdict density_lift(const DensityRun& run) {
  if (run.exit_code != 0) return {false, "augment failed: " + run.err};
  if (run.max_natural_density >= 0.02) return {false, "corpus too dense: " + str(run.max_natural_density)};
  const Dataset out = load_dataset(run.out / kAnnotationFile, run.out / kImageDir);
  const auto samples = read_paste_log(run.out / cli::kPasteLogFile);
  if (out.images.size() != 100 || samples.size() != 100) return {false, "expected 100 samples"};
  size_t reached = 0;
  size_t exhausted = 0;
  for (size_t k = 0; k < samples.size(); ++k) {
    const auto& s = samples[k];
    const ImageRecord& rec = out.images[k];
    if (rec.id != s.image_id) return {false, "sample order mismatch at " + std::to_string(k)};
    if (s.target_density < 0.05 || s.target_density > 0.5) return {false, "target density out of range"};
    const int64_t raster = testing::raster_union_area(rec);
    const int64_t pixels = int64_t(rec.width) * rec.height;
    if (raster != union_area(rec.boxes())) return {false, "geometric union disagrees with raster oracle"};
    if (double(raster) / double(pixels) != object_density(rec)) return {false, "object_density disagrees"};
    if (double(raster) / double(pixels) != s.final_density) {
      return {false, "logged density disagrees with raster oracle on image " + std::to_string(rec.id)};
    }
    if (s.termination == Termination::kReachedTarget) {
      if (double(raster) < s.target_density * double(pixels)) return {false, "reached-target below target"};
      ++reached;
    } else if (s.termination == Termination::kCornersExhausted) {
      ++exhausted;
    } else {
      return {false, "sample " + std::to_string(k) + " terminated " + to_string(s.termination)};
    }
  }
  if (run.seconds >= 60.0) return {false, "runtime " + str(run.seconds) + "s"};
  return {true, std::to_string(reached) + " reached target, " + std::to_string(exhausted) +
                    " corner-exhausted; natural density max " + str(run.max_natural_density) + "; runtime " +
                    str(run.seconds) + "s"};
}

Verdict paste_audit(const DensityRun& run) {
  if (run.exit_code != 0) return {false, "augment failed"};
  const CollageConfig cfg = CollageConfig::rareplanes();
  const Dataset corpus = load_dataset(run.corpus / kAnnotationFile, run.corpus / kImageDir);
  const Dataset out = load_dataset(run.out / kAnnotationFile, run.out / kImageDir);
  const auto samples = read_paste_log(run.out / cli::kPasteLogFile);

  size_t pastes = 0;
  size_t fallbacks = 0;
  size_t imports = 0;
  std::vector<std::string> violations;
  const auto violate = [&](const SampleLog& s, size_t e, const std::string& what) {
    if (violations.size() < 5) {
      violations.push_back("image " + std::to_string(s.image_id) + " paste " + std::to_string(e) + ": " + what);
    }
  };
  for (size_t k = 0; k < samples.size(); ++k) {
    const SampleLog& s = samples[k];
    const ImageRecord& base = corpus.images[s.index];
    const Rect bounds = base.bounds();
    std::vector<BBoxAnnotation> current = base.annotations;
    for (size_t e = 0; e < s.log.entries.size(); ++e) {
      const PasteEntry& p = s.log.entries[e];
      ++pastes;
      fallbacks += p.fallback;
      cv::Mat mask = cv::Mat::zeros(base.height, base.width, CV_8U);
      for (const auto& a : current) mask(cv::Rect(a.box.x, a.box.y, a.box.w, a.box.h)).setTo(1);
      const Rect& cb = p.checked_block;
      if (!bounds.contains(cb) || !bounds.contains(p.block)) violate(s, e, "block out of bounds");
      if (!cb.contains(p.block)) violate(s, e, "pasted block outside checked block");
      const int64_t occluded = bounds.contains(cb) ? cv::countNonZero(mask(cv::Rect(cb.x, cb.y, cb.w, cb.h))) : -1;
      if (occluded != p.occlusion) violate(s, e, "logged occlusion " + std::to_string(p.occlusion) + " != " +
                                                    std::to_string(occluded));
      if (!p.fallback && occluded > cfg.occlusion_tol) violate(s, e, "occlusion " + std::to_string(occluded));
      if (p.fallback && p.margins != Margins{}) violate(s, e, "fallback with margins");
      for (int m : p.margins.v) {
        if (m < 0 || m > cfg.max_dilation) violate(s, e, "margin " + std::to_string(m));
      }
      if (p.attempts > cfg.max_expansions) violate(s, e, "attempts " + std::to_string(p.attempts));
      if (cb != candidate_block(p.seed_box, p.corner, p.margins)) violate(s, e, "checked block mismatch");
      if (p.block.w != p.region.w || p.block.h != p.region.h) violate(s, e, "region/block size mismatch");
      if (p.imported.size() != p.imported_source_boxes.size()) violate(s, e, "import bookkeeping mismatch");
      bool seed_imported = false;
      for (size_t i = 0; i < p.imported.size(); ++i) {
        ++imports;
        const Rect& src = p.imported_source_boxes[i];
        const Rect inside = intersect(src, p.region);
        if (double(inside.area()) * 100.0 < cfg.bbox_threshold * double(src.area())) {
          violate(s, e, "import below threshold");
        }
        const Rect expected = translate(inside, p.block.x - p.region.x, p.block.y - p.region.y);
        if (p.imported[i].box != expected) violate(s, e, "imported box misplaced");
        seed_imported |= src == p.seed_box;
        current.push_back(p.imported[i]);
      }
      if (!seed_imported) violate(s, e, "seed box not imported");
    }
    const auto& written = out.images[k].annotations;
    const bool same = current.size() == written.size() &&
                      std::equal(current.begin(), current.end(), written.begin(), [](const auto& x, const auto& y) {
                        return x.box == y.box && x.category == y.category;
                      });
    if (!same) violate(s, s.log.entries.size(), "final annotations differ from replay");
  }
  if (pastes < 1000) violations.push_back("only " + std::to_string(pastes) + " pastes audited");
  std::string detail = std::to_string(pastes) + " pastes (" + std::to_string(fallbacks) + " fallback, " +
                       std::to_string(imports) + " imported boxes), " + std::to_string(violations.size()) +
                       " violations";
  for (const auto& v : violations) detail += "; " + v;
  return {violations.empty(), detail};
}

Verdict determinism(const TempDir& work) {
  const fs::path corpus = work / "det_corpus";
  testing::write_synthetic({.count = 6, .width = 160, .height = 120, .seed = 7}, corpus);
  const fs::path mixers = work / "det_mixers";
  fs::create_directories(mixers);
  for (int m = 0; m < 3; ++m) {
    cv::imwrite((mixers / ("fractal_" + std::to_string(m) + ".png")).string(), testing::synthetic_mixer(96, m));
  }

  std::ostringstream sink;
  std::string detail;
  for (const std::string mode : {"collage", "colmix-a"}) {
    fs::path dirs[2];
    const size_t workers[2] = {1, 4};
    for (int r = 0; r < 2; ++r) {
      cli::AugmentOptions o;
      o.mode = mode;
      o.input.dir = corpus;
      o.out = dirs[r] = work / (mode + "_w" + std::to_string(workers[r]));
      o.common.overrides = {{"mixers", mixers.string()}};
      o.common.seed = 99;
      o.common.epochs = 2;
      o.common.workers = workers[r];
      if (cli::cmd_augment(o, sink, sink) != 0) return {false, mode + " failed: " + sink.str()};
    }
    if (auto diff = testing::compare_trees(dirs[0], dirs[1], cli::kManifestFile)) {
      return {false, mode + " trees differ: " + *diff};
    }
    detail += mode + " identical; ";
  }

  fs::path dirs[2];
  const size_t workers[2] = {1, 3};
  for (int r = 0; r < 2; ++r) {
    cli::CorruptOptions o;
    o.input.dir = corpus;
    o.out = dirs[r] = work / ("corrupt_w" + std::to_string(workers[r]));
    o.seed = 99;
    o.workers = workers[r];
    if (cli::cmd_corrupt(o, sink, sink) != 0) return {false, "corrupt failed: " + sink.str()};
  }
  if (auto diff = testing::compare_trees(dirs[0], dirs[1], cli::kManifestFile)) {
    return {false, "corrupt trees differ: " + *diff};
  }
  detail += "corrupt (75 cells) identical across --workers 1/4 and 1/3";
  return {true, detail};
}

Verdict evaluator_oracle() {
  Rng rng(20240601);
  double worst = 0;
  size_t defined = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto [gt, dets] = testing::random_eval_instance(rng, 5, 5);
    const auto got = map_coco(dets, gt).map;
    const auto want = testing::oracle_map(dets, gt);
    if (got.has_value() != want.has_value()) return {false, "definedness differs at trial " + std::to_string(trial)};
    if (!got) continue;
    ++defined;
    worst = std::max(worst, std::abs(*got - *want));
    if (std::abs(*got - *want) > 1e-9) {
      return {false, "trial " + std::to_string(trial) + ": " + str(*got) + " vs oracle " + str(*want)};
    }
  }

  CorruptionGrid grid;
  for (auto kind : kAllCorruptions) {
    for (int s : kAllSeverities) grid[{kind, s}] = uniform_real(rng, 0.0, 1.0);
  }
  double eq1 = 0;
  for (auto kind : kAllCorruptions) {
    double inner = 0;
    for (int s : kAllSeverities) inner += grid.at({kind, s});
    eq1 += inner / 5.0;
  }
  eq1 /= 15.0;
  const double got = mapc(grid);
  if (got != eq1) return {false, "mapc " + str(got) + " != " + str(eq1)};
  return {true, std::to_string(defined) + "/1000 instances defined, max |diff| " + str(worst) +
                    "; mapc of random 75-cell grid equals the double mean exactly"};
}

double mse(const cv::Mat& a, const cv::Mat& b) {
  cv::Mat fa;
  cv::Mat fb;
  a.convertTo(fa, CV_64F);
  b.convertTo(fb, CV_64F);
  return cv::norm(fa, fb, cv::NORM_L2SQR) / double(a.total() * a.channels());
}

cv::Mat high_pass(const cv::Mat& bgr) {
  cv::Mat gray;
  cv::Mat f;
  cv::Mat smooth;
  cv::cvtColor(bgr, gray, cv::COLOR_BGR2GRAY);
  gray.convertTo(f, CV_64F);
  cv::GaussianBlur(f, smooth, cv::Size(0, 0), 2.0);
  return f - smooth;
}

// Fraction of the clean image's high-pass energy still present in the corrupted image.
double retained_high_frequency(const cv::Mat& clean_hp, const cv::Mat& corrupted) {
  return clean_hp.dot(high_pass(corrupted)) / clean_hp.dot(clean_hp);
}

Verdict corruption_monotonicity() {
  const Dataset ds = testing::synthetic_dataset({.count = 20, .width = 512, .height = 512, .seed = 55});
  const CorruptionKind noise[] = {CorruptionKind::kGaussianNoise, CorruptionKind::kShotNoise,
                                  CorruptionKind::kImpulseNoise};
  const CorruptionKind blur[] = {CorruptionKind::kDefocusBlur, CorruptionKind::kGlassBlur,
                                 CorruptionKind::kMotionBlur, CorruptionKind::kZoomBlur, CorruptionKind::kPixelate};
  constexpr double kFullyLost = 1e-3;
  size_t checks = 0;
  for (size_t i = 0; i < ds.images.size(); ++i) {
    const cv::Mat& clean = ds.images[i].pixels();
    for (auto kind : noise) {
      double prev = 0.0;
      for (int s : kAllSeverities) {
        Rng rng = corruption_rng(5, {kind, s}, i);
        const double e = mse(corrupt_pixels(clean, {kind, s}, rng), clean);
        if (!(e > prev)) {
          return {false, std::string(to_string(kind)) + " image " + std::to_string(i) + " severity " +
                             std::to_string(s) + ": MSE " + str(e) + " <= " + str(prev)};
        }
        prev = e;
        ++checks;
      }
    }
  }
  std::string detail;
  for (auto kind : blur) {
    std::array<double, 6> retained{1.0, 0, 0, 0, 0, 0};
    for (size_t i = 0; i < ds.images.size(); ++i) {
      const cv::Mat& clean = ds.images[i].pixels();
      const cv::Mat clean_hp = high_pass(clean);
      for (int s : kAllSeverities) {
        Rng rng = corruption_rng(5, {kind, s}, i);
        retained[size_t(s)] += retained_high_frequency(clean_hp, corrupt_pixels(clean, {kind, s}, rng)) /
                               double(ds.images.size());
      }
    }
    for (int s : kAllSeverities) {
      const double before = retained[size_t(s - 1)];
      const double after = retained[size_t(s)];
      const bool saturated = before < kFullyLost && after < kFullyLost;
      if (!(after < before) && !saturated) {
        return {false, std::string(to_string(kind)) + " severity " + std::to_string(s) +
                           ": retained high-frequency fraction " + str(after) + " >= " + str(before)};
      }
      ++checks;
    }
    detail += std::string(detail.empty() ? "" : ", ") + std::string(to_string(kind)) + " " + str(retained[5]);
  }
  return {true, std::to_string(checks) + " severity steps: noise MSE strictly increasing per image on 20 images; "
                                         "blur/pixelate high-frequency loss monotone over 20 images (retained at "
                                         "severity 5: " + detail + ")"};
}

std::string annotation_bytes(const ImageRecord& rec) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& a : rec.annotations) {
    j.push_back({a.box.x, a.box.y, a.box.w, a.box.h, a.category, a.source_image});
  }
  return std::to_string(rec.id) + rec.file_name + std::to_string(rec.width) + "x" + std::to_string(rec.height) +
         j.dump();
}

Verdict pixmix_safety() {
  const Dataset ds = testing::synthetic_dataset({.count = 10, .width = 120, .height = 90, .seed = 66});
  std::vector<cv::Mat> mixer_images;
  for (int m = 0; m < 4; ++m) mixer_images.push_back(testing::synthetic_mixer(128, 100 + m));
  const MixerSet mixers = MixerSet::from_images(mixer_images);
  PixMixConfig cfg;
  Rng rng(77);
  size_t changed = 0;
  size_t rounds_total = 0;
  for (int i = 0; i < 100; ++i) {
    const ImageRecord& in = ds.images[size_t(i) % ds.images.size()];
    cfg.blend_strength = uniform_real(rng, 0.5, 5.0);
    cfg.max_rounds = uniform_int(rng, 1, 6);
    const auto rounds = draw_pixmix_rounds(cfg, mixers.size(), rng);
    rounds_total += rounds.size();
    const ImageRecord out = apply_pixmix(in, mixers, rounds);
    const cv::Mat& px = out.pixels();
    if (px.type() != CV_8UC3 || px.size() != in.pixels().size()) return {false, "bad output shape/type"};
    double lo = 0;
    double hi = 0;
    cv::minMaxLoc(px.reshape(1), &lo, &hi);
    if (lo < 0 || hi > 255) return {false, "pixel out of range"};
    if (annotation_bytes(out) != annotation_bytes(in)) return {false, "annotations changed on mix " + std::to_string(i)};
    changed += cv::norm(px, in.pixels(), cv::NORM_INF) > 0;

    PixMixConfig zero = cfg;
    zero.max_rounds = 0;
    Rng r0{static_cast<uint64_t>(i)};
    const ImageRecord same = pixmix_augment(in, mixers, zero, r0);
    if (cv::norm(same.pixels(), in.pixels(), cv::NORM_INF) != 0.0) return {false, "r=0 changed pixels"};
    if (annotation_bytes(same) != annotation_bytes(in)) return {false, "r=0 changed annotations"};
  }
  return {true, "100 mixes (" + std::to_string(rounds_total) + " rounds, " + std::to_string(changed) +
                    " changed): 8-bit in range, annotations identical; r=0 identity"};
}

Verdict mosaic_partition() {
  const Dataset ds = testing::synthetic_dataset({.count = 5, .width = 203, .height = 149, .seed = 88});
  Rng rng(9);
  for (int cols = 1; cols <= 4; ++cols) {
    for (int rows = 1; rows <= 4; ++rows) {
      const MosaicResult res = mosaic_augment(ds, cols, rows, 50.0, rng, 1);
      const int w = res.image.width;
      const int h = res.image.height;
      cv::Mat cover = cv::Mat::zeros(h, w, CV_32S);
      for (const auto& t : res.tiles) {
        if (t.empty() || !res.image.bounds().contains(t)) return {false, "tile outside image"};
        cover(cv::Rect(t.x, t.y, t.w, t.h)) += 1;
      }
      double lo = 0;
      double hi = 0;
      cv::minMaxLoc(cover, &lo, &hi);
      const std::string grid = std::to_string(cols) + "x" + std::to_string(rows);
      if (lo != 1.0 || hi != 1.0) return {false, grid + ": tiles do not partition the image"};
      for (size_t t = 0; t < res.tiles.size(); ++t) {
        const Rect& r = res.tiles[t];
        const cv::Rect cr(r.x, r.y, r.w, r.h);
        if (cv::norm(res.image.pixels()(cr), ds.images[res.tile_sources[t]].pixels()(cr), cv::NORM_INF) != 0.0) {
          return {false, grid + ": tile " + std::to_string(t) + " pixels differ from its source"};
        }
      }
      for (const auto& a : res.image.annotations) {
        const bool inside_one = std::any_of(res.tiles.begin(), res.tiles.end(),
                                            [&](const Rect& t) { return t.contains(a.box); });
        if (!inside_one) return {false, grid + ": box crosses a tile boundary"};
      }
      if (cols == 1 && rows == 1) {
        const ImageRecord& src = ds.images[res.tile_sources[0]];
        if (cv::norm(res.image.pixels(), src.pixels(), cv::NORM_INF) != 0.0) return {false, "1x1 pixels differ"};
        if (res.image.annotations.size() != src.annotations.size()) return {false, "1x1 boxes differ"};
        for (size_t i = 0; i < src.annotations.size(); ++i) {
          if (res.image.annotations[i].box != src.annotations[i].box ||
              res.image.annotations[i].category != src.annotations[i].category) {
            return {false, "1x1 boxes differ"};
          }
        }
      }
    }
  }
  return {true, "16 grids partition a 203x149 output exactly; 1x1 reproduces its source"};
}

Verdict clean_vs_corrupted(const TempDir& work) {
  const fs::path corpus = work / "eval_corpus";
  const Dataset clean = testing::write_synthetic(
      {.count = 8, .width = 160, .height = 160, .min_objects = 4, .max_objects = 8, .seed = 303}, corpus);
  const fs::path grid = work / "eval_grid";
  CorruptionSuiteOptions suite;
  suite.seed = 17;
  suite.workers = 1;
  corrupt_dataset(clean, suite, grid);

  // Detector stand-in: ground truth boxes jittered by noise whose scale grows
  // with the pixel MSE between the evaluated image and its clean version.
  const auto detect = [&](const Dataset& images, uint64_t stream, const fs::path& file) {
    std::vector<DetectionResult> dets;
    Rng rng(derive_seed(4242, {stream}));
    for (size_t i = 0; i < images.images.size(); ++i) {
      const double err = mse(images.images[i].pixels(), clean.images[i].pixels());
      const double sigma = 0.3 + 0.02 * err;
      std::normal_distribution<double> jitter(0.0, sigma);
      for (const auto& a : clean.images[i].annotations) {
        const double w = std::max(1.0, a.box.w + jitter(rng));
        const double h = std::max(1.0, a.box.h + jitter(rng));
        dets.push_back({images.images[i].id, a.category, BoxF{a.box.x + jitter(rng), a.box.y + jitter(rng), w, h},
                        uniform_real(rng, 0.5, 1.0)});
      }
    }
    save_detections(dets, file);
  };
  detect(clean, 0, work / "clean_detections.json");
  uint64_t stream = 1;
  for (auto kind : kAllCorruptions) {
    for (int s : kAllSeverities) {
      const fs::path cell = corruption_cell_dir(grid, {kind, s});
      detect(load_dataset(cell / kAnnotationFile, cell / kImageDir), stream++, cell / "detections.json");
    }
  }

  cli::EvalOptions e;
  e.ground_truth = corpus / kAnnotationFile;
  e.detections = work / "clean_detections.json";
  e.grid_root = grid;
  e.out = work / "eval_report";
  std::ostringstream out;
  std::ostringstream err;
  if (cli::cmd_eval(e, out, err) != 0) return {false, "eval failed: " + err.str()};
  std::ifstream in(work / "eval_report" / "report.json");
  const auto report = nlohmann::json::parse(in);
  const double map = report.at("mAP").get<double>();
  const double mapc_value = report.at("mAPc").get<double>();
  return {mapc_value < map, "clean mAP " + str(map) + ", mAPc " + str(mapc_value)};
}

}  // namespace

int main() {
  TempDir work("acceptance");
  const DensityRun density = run_density_generation(work);
  report("density-lift", [&] { return density_lift(density); });
  report("paste-audit", [&] { return paste_audit(density); });
  report("determinism", [&] { return determinism(work); });
  report("evaluator-oracle", evaluator_oracle);
  report("corruption-monotonicity", corruption_monotonicity);
  report("pixmix-safety", pixmix_safety);
  report("mosaic-partition", mosaic_partition);
  report("clean-vs-corrupted-ordering", [&] { return clean_vs_corrupted(work); });
  std::cout << (g_failures == 0 ? "all criteria passed" : std::to_string(g_failures) + " criteria failed")
            << std::endl;
  return g_failures;
}
