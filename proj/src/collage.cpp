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

#include "colmix/collage.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "colmix/error.hpp"
#include "colmix/parallel.hpp"
#include "json.hpp"

namespace colmix {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

std::string to_string(BaseMode mode) {
  return mode == BaseMode::kExistingImage ? "existing-image" : "blank-canvas";
}

BaseMode parse_base_mode(const std::string& text) {
  if (text == "existing-image" || text == "existing") return BaseMode::kExistingImage;
  if (text == "blank-canvas" || text == "blank") return BaseMode::kBlankCanvas;
  throw ConfigError("base_mode must be 'existing-image' or 'blank-canvas', got '" + text + "'");
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::kReachedTarget:
      return "reached-target";
    case Termination::kCornersExhausted:
      return "corners-exhausted";
    case Termination::kStalled:
      return "stalled";
  }
  return "unknown";
}

namespace {

Termination parse_termination(const std::string& s) {
  if (s == "reached-target") return Termination::kReachedTarget;
  if (s == "corners-exhausted") return Termination::kCornersExhausted;
  if (s == "stalled") return Termination::kStalled;
  throw ParseError("unknown termination '" + s + "'");
}

cv::Rect to_cv(const Rect& r) { return cv::Rect(r.x, r.y, r.w, r.h); }

/// Binary mask of pixels covered by at least one box, with a summed-area
/// table for O(1) counts inside any rectangle.
class CoverageMap {
 public:
  CoverageMap(int width, int height) : bounds_{0, 0, width, height}, mask_(height, width, CV_8U, cv::Scalar(0)) {}

  void add(const Rect& r) {
    const Rect c = intersect(r, bounds_);
    if (c.empty()) return;
    mask_(to_cv(c)).setTo(1);
    dirty_ = true;
  }

  int64_t count(const Rect& r) const {
    const Rect c = intersect(r, bounds_);
    if (c.empty()) return 0;
    refresh();
    const auto at = [this](int x, int y) { return int64_t{sums_.at<int32_t>(y, x)}; };
    return at(c.right(), c.bottom()) - at(c.x, c.bottom()) - at(c.right(), c.y) + at(c.x, c.y);
  }

  int64_t covered() const { return count(bounds_); }

  bool covers(Point p) const { return bounds_.contains(p.x, p.y) && mask_.at<uint8_t>(p.y, p.x) != 0; }

 private:
  void refresh() const {
    if (!dirty_) return;
    cv::integral(mask_, sums_, CV_32S);
    dirty_ = false;
  }

  Rect bounds_;
  cv::Mat mask_;
  mutable cv::Mat sums_;
  mutable bool dirty_ = true;
};

}  // namespace

void CollageConfig::validate() const {
  auto fail = [](const std::string& m) { throw ConfigError("invalid collage config: " + m); };
  if (!(target_density_lo > 0.0 && target_density_lo <= target_density_hi && target_density_hi <= 1.0)) {
    fail("TargetDensity must satisfy 0 < lo <= hi <= 1");
  }
  if (min_size < 1) fail("MinSize must be >= 1");
  if (max_dilation < 0) fail("MaxDilation must be >= 0");
  if (max_expansions < 0) fail("MaxExpansions must be >= 0");
  if (min_step < 0 || max_step < 0) fail("MinStep/MaxStep must be >= 0");
  if (min_step > max_step) fail("MinStep must not exceed MaxStep");
  if (occlusion_tol < 0) fail("OcclusionTol must be >= 0");
  if (!(bbox_threshold > 0.0 && bbox_threshold <= 100.0)) fail("BBoxThreshold must be in (0, 100]");
}

CollageConfig CollageConfig::rareplanes() {
  CollageConfig c;
  c.target_density_lo = 0.05;
  c.target_density_hi = 0.5;
  c.min_size = 25;
  c.max_dilation = 512;
  c.max_expansions = 100;
  c.min_step = 5;
  c.max_step = 30;
  c.occlusion_tol = 20;
  c.bbox_threshold = 50.0;
  return c;
}

CollageConfig CollageConfig::xview39() {
  CollageConfig c = rareplanes();
  c.target_density_lo = 0.01;
  c.target_density_hi = 0.3;
  c.max_dilation = 1333;
  c.occlusion_tol = 0;
  return c;
}

void CornerGrid::shuffle(Rng& rng) { std::shuffle(corners_.begin(), corners_.end(), rng); }

size_t CornerGrid::remove_if(const std::function<bool(Point)>& covered) {
  const size_t before = corners_.size();
  std::erase_if(corners_, covered);
  return before - corners_.size();
}

size_t CornerGrid::remove_covered(std::span<const Rect> boxes) {
  return remove_if([&](Point c) {
    return std::any_of(boxes.begin(), boxes.end(), [&](const Rect& b) { return b.contains(c.x, c.y); });
  });
}

CornerGrid build_corner_grid(const ImageRecord& record, int min_size) {
  if (min_size < 1) throw ConfigError("MinSize must be >= 1");
  std::vector<Point> corners;
  for (int i = 0; i <= record.width / min_size; ++i) {
    for (int j = 0; j <= record.height / min_size; ++j) {
      const Point c{i * min_size, j * min_size};
      const bool inside = std::any_of(record.annotations.begin(), record.annotations.end(),
                                      [&](const BBoxAnnotation& a) { return a.box.contains(c.x, c.y); });
      if (!inside) corners.push_back(c);
    }
  }
  return CornerGrid(std::move(corners));
}

AnnotationPool::AnnotationPool(const Dataset& dataset) {
  for (size_t i = 0; i < dataset.images.size(); ++i) {
    for (size_t a = 0; a < dataset.images[i].annotations.size(); ++a) entries_.emplace_back(i, a);
  }
}

std::pair<size_t, size_t> AnnotationPool::draw(Rng& rng) const {
  if (entries_.empty()) throw SelectionError("dataset has no annotations to select from");
  return entries_[std::uniform_int_distribution<size_t>(0, entries_.size() - 1)(rng)];
}

std::pair<const ImageRecord*, const BBoxAnnotation*> select_source_annotation(const Dataset& dataset, Rng& rng) {
  const auto [i, a] = AnnotationPool(dataset).draw(rng);
  return {&dataset.images[i], &dataset.images[i].annotations[a]};
}

Rect rotate_rect(const Rect& r, int width, int height, int quarter_turns) {
  Rect out = r;
  int w = width;
  int h = height;
  for (int t = 0; t < ((quarter_turns % 4) + 4) % 4; ++t) {
    // Clockwise: pixel (x, y) of a w x h image lands on (h - 1 - y, x).
    out = Rect{h - out.y - out.h, out.x, out.h, out.w};
    std::swap(w, h);
  }
  return out;
}

ImageRecord rotate_source(const ImageRecord& record, int quarter_turns) {
  const int turns = ((quarter_turns % 4) + 4) % 4;
  if (turns == 0) return record;
  cv::Mat rotated;
  static constexpr cv::RotateFlags kCodes[] = {cv::ROTATE_90_CLOCKWISE, cv::ROTATE_180,
                                               cv::ROTATE_90_COUNTERCLOCKWISE};
  cv::rotate(record.pixels(), rotated, kCodes[turns - 1]);
  std::vector<BBoxAnnotation> anns = record.annotations;
  for (auto& a : anns) a.box = rotate_rect(a.box, record.width, record.height, turns);
  return ImageRecord::from_pixels(record.id, std::move(rotated), std::move(anns), record.file_name);
}

ExpansionResult try_expand_block(const Rect& target_bounds, const Rect& bbox, Point corner,
                                 const CollageConfig& config, const OcclusionCounter& occlusion, Rng& rng) {
  ExpansionResult res;
  Margins margins;
  for (int attempt = 0; attempt < config.max_expansions; ++attempt) {
    ++res.attempts;
    Margins next = margins;
    const int step = uniform_int(rng, config.min_step, config.max_step);
    const auto side = static_cast<size_t>(uniform_int(rng, 0, 3));
    next[side] = std::min(next[side] + step, config.max_dilation);
    const Rect block = candidate_block(bbox, corner, next);
    if (!target_bounds.contains(block)) continue;
    const int64_t occluded = occlusion(block);
    if (occluded > config.occlusion_tol) continue;
    margins = next;
    ++res.commits;
    res.block = block;
    res.occlusion = occluded;
  }
  if (res.commits > 0) res.margins = margins;
  return res;
}

ExpansionResult try_expand_block(const ImageRecord& target, const Rect& bbox, Point corner,
                                 const CollageConfig& config, Rng& rng) {
  const auto boxes = target.boxes();
  return try_expand_block(
      target.bounds(), bbox, corner, config, [&](const Rect& r) { return union_area(boxes, r); }, rng);
}

PasteOutcome paste_block(cv::Mat& canvas, ImageId target_id, const ImageRecord& source, const BBoxAnnotation& seed,
                         Point corner, const Margins& margins, double bbox_threshold) {
  const Rect grown{seed.box.x - margins.left(), seed.box.y - margins.top(),
                   seed.box.w + margins.left() + margins.right(), seed.box.h + margins.top() + margins.bottom()};
  PasteOutcome out;
  out.region = intersect(grown, source.bounds());
  if (!out.region.contains(seed.box)) throw InvariantError("seed box lies outside its source image");
  out.block = Rect{corner.x, corner.y, out.region.w, out.region.h};
  if (!Rect{0, 0, canvas.cols, canvas.rows}.contains(out.block)) {
    throw InvariantError("pasted block leaves the target image");
  }

  source.pixels()(to_cv(out.region)).copyTo(canvas(to_cv(out.block)));

  const int dx = corner.x - out.region.x;
  const int dy = corner.y - out.region.y;
  for (const auto& s : source.annotations) {
    const Rect inside = intersect(s.box, out.region);
    if (inside.empty()) continue;
    if (double(inside.area()) * 100.0 < bbox_threshold * double(s.box.area())) continue;
    out.imported.push_back(BBoxAnnotation{translate(inside, dx, dy), s.category, target_id});
    out.imported_source_boxes.push_back(s.box);
  }
  return out;
}

PasteOutcome paste_block(ImageRecord& target, const ImageRecord& source, const BBoxAnnotation& seed, Point corner,
                         const Margins& margins, double bbox_threshold) {
  cv::Mat canvas = target.pixels().clone();
  PasteOutcome out = paste_block(canvas, target.id, source, seed, corner, margins, bbox_threshold);
  target.set_pixels(std::move(canvas));
  target.annotations.insert(target.annotations.end(), out.imported.begin(), out.imported.end());
  return out;
}

ImageRecord blank_canvas(ImageId id, int width, int height, uint8_t fill, std::string file_name) {
  return ImageRecord::from_pixels(id, cv::Mat(height, width, CV_8UC3, cv::Scalar::all(fill)), {},
                                  std::move(file_name));
}

CollageEngine::CollageEngine(const Dataset& dataset, CollageConfig config)
    : dataset_(&dataset), config_(config), pool_(dataset) {
  config_.validate();
}

CollageResult CollageEngine::run(const ImageRecord& base, Rng& rng) const {
  const CollageConfig& cfg = config_;
  const Rect bounds = base.bounds();
  const double total = double(bounds.area());

  CollageResult res;
  cv::Mat canvas = base.pixels().clone();
  std::vector<BBoxAnnotation> annotations = base.annotations;
  for (auto& a : annotations) a.source_image = base.id;
  res.base_annotations = annotations;

  CoverageMap coverage(base.width, base.height);
  for (const auto& a : annotations) coverage.add(a.box);
  const OcclusionCounter occlusion = [&coverage](const Rect& r) { return coverage.count(r); };
  const auto density = [&] { return double(coverage.covered()) / total; };

  res.target_density = uniform_real(rng, cfg.target_density_lo, cfg.target_density_hi);
  CornerGrid grid = build_corner_grid(base, cfg.min_size);

  int stalled = 0;
  while (density() < res.target_density) {
    if (grid.empty()) {
      res.termination = Termination::kCornersExhausted;
      break;
    }
    ++res.iterations;
    const auto [image_index, ann_index] = pool_.draw(rng);
    const int turns = uniform_int(rng, 0, 3);
    const ImageRecord source = rotate_source(dataset_->images[image_index], turns);
    const BBoxAnnotation& seed = source.annotations[ann_index];
    grid.shuffle(rng);

    const int64_t covered_before = coverage.covered();
    std::optional<PasteEntry> entry;

    for (const Point c : grid.active()) {
      const Rect bare = candidate_block(seed.box, c, Margins{});
      // Every candidate block contains the bare box, so these corners cannot succeed.
      if (!bounds.contains(bare) || coverage.count(bare) > cfg.occlusion_tol) continue;
      const ExpansionResult ex = try_expand_block(bounds, seed.box, c, cfg, occlusion, rng);
      if (!ex.margins) continue;
      PasteOutcome out = paste_block(canvas, base.id, source, seed, c, *ex.margins, cfg.bbox_threshold);
      entry = PasteEntry{source.id, turns,        seed.box,         c, *ex.margins, ex.block, out.block,
                         out.region, ex.attempts, ex.occlusion, false, std::move(out.imported),
                         std::move(out.imported_source_boxes)};
      break;
    }

    if (!entry) {
      std::vector<Point> fitting;
      for (const Point c : grid.active()) {
        if (bounds.contains(candidate_block(seed.box, c, Margins{}))) fitting.push_back(c);
      }
      if (!fitting.empty()) {
        const Point c = fitting[std::uniform_int_distribution<size_t>(0, fitting.size() - 1)(rng)];
        const Rect bare = candidate_block(seed.box, c, Margins{});
        const int64_t occluded = coverage.count(bare);
        PasteOutcome out = paste_block(canvas, base.id, source, seed, c, Margins{}, cfg.bbox_threshold);
        entry = PasteEntry{source.id,  turns, seed.box, c,    Margins{}, bare, out.block, out.region,
                           0,          occluded, true, std::move(out.imported), std::move(out.imported_source_boxes)};
      }
    }

    if (entry) {
      for (const auto& a : entry->imported) {
        coverage.add(a.box);
        annotations.push_back(a);
      }
      res.log.entries.push_back(std::move(*entry));
    }

    const size_t removed = grid.remove_if([&coverage](Point c) { return coverage.covers(c); });
    if (coverage.covered() == covered_before && removed == 0) {
      if (++stalled >= kMaxStalledIterations) {
        res.termination = Termination::kStalled;
        break;
      }
    } else {
      stalled = 0;
    }
  }
  if (density() >= res.target_density) res.termination = Termination::kReachedTarget;

  res.image = ImageRecord::from_pixels(base.id, std::move(canvas), std::move(annotations), base.file_name);
  return res;
}

CollageResult collage_augment(const ImageRecord& base, const Dataset& dataset, const CollageConfig& config,
                              Rng& rng) {
  return CollageEngine(dataset, config).run(base, rng);
}

std::string sample_file_name(size_t epoch, size_t index) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "e%03zu_%06zu.png", epoch, index);
  return buf;
}

ImageId sample_image_id(size_t epoch, size_t index, size_t dataset_size) {
  return static_cast<ImageId>(epoch * dataset_size + index + 1);
}

ImageRecord collage_base(const Dataset& dataset, size_t index, const CollageConfig& config, ImageId out_id) {
  const ImageRecord& src = dataset.images.at(index);
  if (config.base_mode == BaseMode::kBlankCanvas) {
    return blank_canvas(out_id, src.width, src.height, config.canvas_fill, src.file_name);
  }
  ImageRecord base = src;
  base.id = out_id;
  for (auto& a : base.annotations) a.source_image = out_id;
  return base;
}

void write_sample_image(ImageRecord& record, const fs::path& out_dir) {
  const fs::path dest = out_dir / kImageDir / record.file_name;
  std::error_code ec;
  fs::create_directories(dest.parent_path(), ec);
  if (ec) throw IoError("cannot create " + dest.parent_path().string() + ": " + ec.message());
  if (!cv::imwrite(dest.string(), record.pixels())) throw IoError("cannot write image " + dest.string());
  record = ImageRecord(record.id, record.width, record.height, record.file_name, std::move(record.annotations),
                       std::make_shared<const PixelSource>(dest));
}

void save_annotations(const Dataset& dataset, const fs::path& out_dir) {
  // Same schema as save_dataset, without touching pixels.
  ojson root;
  root["images"] = ojson::array();
  root["annotations"] = ojson::array();
  root["categories"] = ojson::array();
  int64_t next_ann_id = 1;
  for (const auto& rec : dataset.images) {
    root["images"].push_back(
        {{"id", rec.id}, {"file_name", rec.file_name}, {"width", rec.width}, {"height", rec.height}});
    for (const auto& a : rec.annotations) {
      root["annotations"].push_back({{"id", next_ann_id++},
                                     {"image_id", rec.id},
                                     {"category_id", a.category},
                                     {"bbox", {a.box.x, a.box.y, a.box.w, a.box.h}},
                                     {"area", a.box.area()},
                                     {"iscrowd", 0}});
    }
  }
  for (const auto& [id, name] : dataset.categories) root["categories"].push_back({{"id", id}, {"name", name}});
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  const fs::path ann = out_dir / kAnnotationFile;
  std::ofstream out(ann, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + ann.string());
  out << root.dump(1) << '\n';
}

GeneratedDataset generate_collage_dataset(const Dataset& dataset, const CollageConfig& config,
                                          const GenerateOptions& options) {
  if (options.epochs < 1) throw ConfigError("epochs must be >= 1");
  const CollageEngine engine(dataset, config);
  const size_t n = dataset.images.size();
  const size_t total = options.epochs * n;

  GeneratedDataset out;
  out.dataset.categories = dataset.categories;
  if (options.out_dir) out.dataset.root = *options.out_dir / kImageDir;
  out.dataset.images.resize(total);
  out.samples.resize(total);

  parallel_for(total, options.workers, [&](size_t k) {
    const size_t epoch = k / n;
    const size_t index = k % n;
    try {
      const ImageId id = sample_image_id(epoch, index, n);
      const ImageRecord base = collage_base(dataset, index, config, id);
      Rng rng = sample_rng(config.seed, Stream::kCollage, epoch, index);
      CollageResult res = engine.run(base, rng);
      res.image.file_name = sample_file_name(epoch, index);

      SampleLog& log = out.samples[k];
      log.image_id = id;
      log.epoch = epoch;
      log.index = index;
      log.target_density = res.target_density;
      log.final_density = object_density(res.image);
      log.termination = res.termination;
      log.log = std::move(res.log);

      if (options.post_process) {
        res.image = options.post_process(std::move(res.image), epoch, index);
        res.image.file_name = sample_file_name(epoch, index);
      }
      if (options.out_dir) write_sample_image(res.image, *options.out_dir);
      out.dataset.images[k] = std::move(res.image);
    } catch (const Error& e) {
      throw Error("sample (epoch " + std::to_string(epoch) + ", index " + std::to_string(index) +
                  ", source image id " + std::to_string(dataset.images[index].id) + "): " + e.what());
    }
  });
  return out;
}

namespace {

ojson rect_json(const Rect& r) { return ojson::array({r.x, r.y, r.w, r.h}); }

Rect rect_from(const nlohmann::json& j) {
  return Rect{j.at(0).get<int>(), j.at(1).get<int>(), j.at(2).get<int>(), j.at(3).get<int>()};
}

}  // namespace

void write_paste_log(std::span<const SampleLog> samples, const fs::path& file) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write paste log " + file.string());
  for (const auto& s : samples) {
    size_t seq = 0;
    for (const auto& e : s.log.entries) {
      ojson imported = ojson::array();
      for (size_t i = 0; i < e.imported.size(); ++i) {
        imported.push_back({{"category_id", e.imported[i].category},
                            {"bbox", rect_json(e.imported[i].box)},
                            {"source_bbox", rect_json(e.imported_source_boxes[i])}});
      }
      ojson rec = {{"type", "paste"},
                   {"image_id", s.image_id},
                   {"seq", seq++},
                   {"source_image", e.source_image},
                   {"quarter_turns", e.quarter_turns},
                   {"seed_bbox", rect_json(e.seed_box)},
                   {"corner", {e.corner.x, e.corner.y}},
                   {"margins", {e.margins.left(), e.margins.top(), e.margins.right(), e.margins.bottom()}},
                   {"checked_block", rect_json(e.checked_block)},
                   {"block", rect_json(e.block)},
                   {"region", rect_json(e.region)},
                   {"attempts", e.attempts},
                   {"occlusion", e.occlusion},
                   {"fallback", e.fallback},
                   {"imported", std::move(imported)}};
      out << rec.dump() << '\n';
    }
    ojson summary = {{"type", "sample"},
                     {"image_id", s.image_id},
                     {"epoch", s.epoch},
                     {"index", s.index},
                     {"target_density", s.target_density},
                     {"final_density", s.final_density},
                     {"termination", to_string(s.termination)},
                     {"pastes", s.log.entries.size()}};
    out << summary.dump() << '\n';
  }
  if (!out) throw IoError("write failed: " + file.string());
}

std::vector<SampleLog> read_paste_log(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open paste log " + file.string());
  std::vector<SampleLog> samples;
  SampleLog current;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      const auto type = j.at("type").get<std::string>();
      if (type == "paste") {
        PasteEntry e;
        e.source_image = j.at("source_image").get<ImageId>();
        e.quarter_turns = j.at("quarter_turns").get<int>();
        e.seed_box = rect_from(j.at("seed_bbox"));
        e.corner = Point{j.at("corner").at(0).get<int>(), j.at("corner").at(1).get<int>()};
        for (size_t i = 0; i < 4; ++i) e.margins[i] = j.at("margins").at(i).get<int>();
        e.checked_block = rect_from(j.at("checked_block"));
        e.block = rect_from(j.at("block"));
        e.region = rect_from(j.at("region"));
        e.attempts = j.at("attempts").get<int>();
        e.occlusion = j.at("occlusion").get<int64_t>();
        e.fallback = j.at("fallback").get<bool>();
        const ImageId image_id = j.at("image_id").get<ImageId>();
        for (const auto& imp : j.at("imported")) {
          e.imported.push_back(BBoxAnnotation{rect_from(imp.at("bbox")), imp.at("category_id").get<CategoryId>(),
                                              image_id});
          e.imported_source_boxes.push_back(rect_from(imp.at("source_bbox")));
        }
        current.log.entries.push_back(std::move(e));
      } else if (type == "sample") {
        current.image_id = j.at("image_id").get<ImageId>();
        current.epoch = j.at("epoch").get<size_t>();
        current.index = j.at("index").get<size_t>();
        current.target_density = j.at("target_density").get<double>();
        current.final_density = j.at("final_density").get<double>();
        current.termination = parse_termination(j.at("termination").get<std::string>());
        samples.push_back(std::move(current));
        current = SampleLog{};
      } else {
        throw ParseError("unknown record type '" + type + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(file.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return samples;
}

std::vector<Rect> tile_grid(int width, int height, int cols, int rows) {
  if (cols < 1 || rows < 1) throw ConfigError("mosaic grid dimensions must be >= 1");
  std::vector<Rect> tiles;
  tiles.reserve(size_t(cols) * size_t(rows));
  for (int r = 0; r < rows; ++r) {
    const int y0 = int(int64_t{r} * height / rows);
    const int y1 = int(int64_t{r + 1} * height / rows);
    for (int c = 0; c < cols; ++c) {
      const int x0 = int(int64_t{c} * width / cols);
      const int x1 = int(int64_t{c + 1} * width / cols);
      tiles.push_back(Rect{x0, y0, x1 - x0, y1 - y0});
    }
  }
  return tiles;
}

MosaicResult mosaic_augment(const Dataset& dataset, int cols, int rows, double bbox_threshold, Rng& rng,
                            ImageId out_id) {
  if (dataset.images.empty()) throw SelectionError("mosaic needs a non-empty dataset");
  const auto draw_image = [&] {
    return std::uniform_int_distribution<size_t>(0, dataset.images.size() - 1)(rng);
  };

  MosaicResult res;
  const size_t first = draw_image();
  const int width = dataset.images[first].width;
  const int height = dataset.images[first].height;
  res.tiles = tile_grid(width, height, cols, rows);
  cv::Mat canvas(height, width, CV_8UC3, cv::Scalar::all(0));
  std::vector<BBoxAnnotation> annotations;

  for (size_t t = 0; t < res.tiles.size(); ++t) {
    const size_t src_index = t == 0 ? first : draw_image();
    res.tile_sources.push_back(src_index);
    const ImageRecord& src = dataset.images[src_index];
    const Rect& tile = res.tiles[t];
    if (tile.empty()) continue;

    const bool resize = src.width != width || src.height != height;
    cv::Mat pixels = src.pixels();
    if (resize) cv::resize(pixels, pixels, cv::Size(width, height), 0, 0, cv::INTER_LINEAR);
    pixels(to_cv(tile)).copyTo(canvas(to_cv(tile)));

    const double sx = double(width) / src.width;
    const double sy = double(height) / src.height;
    for (const auto& a : src.annotations) {
      Rect box = a.box;
      if (resize) {
        const int x0 = int(std::floor(a.box.x * sx));
        const int y0 = int(std::floor(a.box.y * sy));
        const int x1 = std::min(width, int(std::ceil(a.box.right() * sx)));
        const int y1 = std::min(height, int(std::ceil(a.box.bottom() * sy)));
        box = Rect{x0, y0, x1 - x0, y1 - y0};
      }
      const Rect inside = intersect(box, tile);
      if (inside.empty() || double(inside.area()) * 100.0 < bbox_threshold * double(box.area())) continue;
      annotations.push_back(BBoxAnnotation{inside, a.category, out_id});
    }
  }
  res.image = ImageRecord::from_pixels(out_id, std::move(canvas), std::move(annotations),
                                       dataset.images[first].file_name);
  return res;
}

BBoxPasteResult bbox_paste_augment(const ImageRecord& target, const Dataset& dataset, size_t count, Rng& rng) {
  BBoxPasteResult res;
  cv::Mat canvas = target.pixels().clone();
  std::vector<BBoxAnnotation> annotations = target.annotations;
  if (count > 0) {
    const AnnotationPool pool(dataset);
    for (size_t k = 0; k < count; ++k) {
      const auto [image_index, ann_index] = pool.draw(rng);
      const ImageRecord& src = dataset.images[image_index];
      const BBoxAnnotation& seed = src.annotations[ann_index];
      bool placed = false;
      if (seed.box.w <= target.width && seed.box.h <= target.height) {
        for (int attempt = 0; attempt < kBBoxPasteRetries && !placed; ++attempt) {
          const Rect spot{uniform_int(rng, 0, target.width - seed.box.w),
                          uniform_int(rng, 0, target.height - seed.box.h), seed.box.w, seed.box.h};
          const bool overlaps = std::any_of(annotations.begin(), annotations.end(), [&](const BBoxAnnotation& a) {
            return !intersect(a.box, spot).empty();
          });
          if (overlaps) continue;
          src.pixels()(to_cv(seed.box)).copyTo(canvas(to_cv(spot)));
          annotations.push_back(BBoxAnnotation{spot, seed.category, target.id});
          placed = true;
        }
      }
      placed ? ++res.pasted : ++res.failed;
    }
  }
  res.image = ImageRecord::from_pixels(target.id, std::move(canvas), std::move(annotations), target.file_name);
  return res;
}

}  // namespace colmix
