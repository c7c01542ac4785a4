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


#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <opencv2/core.hpp>

#include "colmix/collage.hpp"
#include "colmix/config.hpp"
#include "colmix/corruption.hpp"
#include "colmix/dataset.hpp"
#include "colmix/error.hpp"
#include "colmix/pixmix.hpp"
#include "colmix/random.hpp"
#include "commands.hpp"

namespace py = pybind11;
namespace fs = std::filesystem;

namespace {

using colmix::BBoxAnnotation;
using colmix::ImageRecord;

using PyBox = std::tuple<int, int, int, int, colmix::CategoryId>;
using PixelArray = py::array_t<uint8_t, py::array::c_style | py::array::forcecast>;

cv::Mat to_mat(const PixelArray& array) {
  if (array.ndim() != 3 || array.shape(2) != 3) {
    throw colmix::ValidationError("expected an HxWx3 uint8 array, got shape with " + std::to_string(array.ndim()) +
                                  " dimensions");
  }
  const int rows = static_cast<int>(array.shape(0));
  const int cols = static_cast<int>(array.shape(1));
  if (rows < 1 || cols < 1) throw colmix::ValidationError("image must be non-empty");
  cv::Mat mat(rows, cols, CV_8UC3);
  std::memcpy(mat.data, array.data(), static_cast<size_t>(rows) * cols * 3);
  return mat;
}

py::array_t<uint8_t> to_array(const cv::Mat& mat) {
  cv::Mat dense = mat.isContinuous() ? mat : mat.clone();
  py::array_t<uint8_t> out({dense.rows, dense.cols, 3});
  std::memcpy(out.mutable_data(), dense.data, dense.total() * 3);
  return out;
}

std::vector<BBoxAnnotation> to_annotations(const std::vector<PyBox>& boxes, const cv::Mat& pixels, colmix::ImageId id) {
  const colmix::Rect bounds{0, 0, pixels.cols, pixels.rows};
  std::vector<BBoxAnnotation> out;
  out.reserve(boxes.size());
  for (const auto& [x, y, w, h, category] : boxes) {
    const colmix::Rect box{x, y, w, h};
    if (w < 1 || h < 1 || !bounds.contains(box)) {
      throw colmix::ValidationError("box (" + std::to_string(x) + ", " + std::to_string(y) + ", " +
                                    std::to_string(w) + ", " + std::to_string(h) + ") is empty or outside the " +
                                    std::to_string(pixels.cols) + "x" + std::to_string(pixels.rows) + " image");
    }
    out.push_back(BBoxAnnotation{box, category, id});
  }
  return out;
}

std::vector<PyBox> to_boxes(const std::vector<BBoxAnnotation>& annotations) {
  std::vector<PyBox> out;
  out.reserve(annotations.size());
  for (const auto& a : annotations) out.emplace_back(a.box.x, a.box.y, a.box.w, a.box.h, a.category);
  return out;
}

std::string setting_text(const py::handle& value) {
  if (py::isinstance<py::bool_>(value)) return value.cast<bool>() ? "true" : "false";
  if (py::isinstance<py::list>(value) || py::isinstance<py::tuple>(value)) {
    std::string joined;
    for (const auto& item : value) joined += (joined.empty() ? "" : ",") + setting_text(item);
    return joined;
  }
  return py::str(value).cast<std::string>();
}

colmix::RunConfig run_config(const py::object& mapping, uint64_t seed) {
  std::vector<std::pair<std::string, std::string>> settings;
  if (!mapping.is_none()) {
    for (const auto& [key, value] : mapping.cast<py::dict>()) {
      settings.emplace_back(py::str(key).cast<std::string>(), setting_text(value));
    }
  }
  colmix::RunConfig config = colmix::run_config_from(settings);
  config.set_seed(seed);
  config.validate();
  return config;
}

const colmix::MixerSet& cached_mixers(const fs::path& dir) {
  static std::mutex mutex;
  static std::map<fs::path, colmix::MixerSet> cache;
  const fs::path key = fs::absolute(dir).lexically_normal();
  std::lock_guard lock(mutex);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, colmix::MixerSet::load(key)).first;
  return it->second;
}

py::tuple array_image(const ImageRecord& record) {
  return py::make_tuple(to_array(record.pixels()), to_boxes(record.annotations));
}

py::tuple py_collage(const std::vector<std::pair<PixelArray, std::vector<PyBox>>>& samples, const py::object& config,
                     uint64_t seed, size_t index, size_t epoch) {
  if (samples.empty()) throw colmix::SelectionError("sample batch is empty");
  if (index >= samples.size()) {
    throw colmix::ConfigError("index " + std::to_string(index) + " out of range for a batch of " +
                              std::to_string(samples.size()));
  }
  const colmix::RunConfig cfg = run_config(config, seed);
  colmix::Dataset dataset;
  for (size_t i = 0; i < samples.size(); ++i) {
    const auto id = static_cast<colmix::ImageId>(i + 1);
    cv::Mat pixels = to_mat(samples[i].first);
    auto annotations = to_annotations(samples[i].second, pixels, id);
    dataset.images.push_back(ImageRecord::from_pixels(id, std::move(pixels), std::move(annotations),
                                                      "sample_" + std::to_string(id) + ".png"));
  }
  if (dataset.annotation_count() == 0) throw colmix::SelectionError("sample batch has no annotations");

  colmix::CollageResult result;
  {
    py::gil_scoped_release release;
    const colmix::CollageEngine engine(dataset, cfg.collage);
    const colmix::ImageId id = colmix::sample_image_id(epoch, index, samples.size());
    colmix::Rng rng = colmix::sample_rng(cfg.collage.seed, colmix::Stream::kCollage, epoch, index);
    result = engine.run(colmix::collage_base(dataset, index, cfg.collage, id), rng);
  }
  return array_image(result.image);
}

py::tuple py_pixmix(const PixelArray& image, const fs::path& mixer_dir, const py::object& config, uint64_t seed,
                    const std::vector<PyBox>& boxes, size_t index, size_t epoch) {
  const colmix::RunConfig cfg = run_config(config, seed);
  cv::Mat pixels = to_mat(image);
  auto annotations = to_annotations(boxes, pixels, 1);
  const ImageRecord record = ImageRecord::from_pixels(1, std::move(pixels), std::move(annotations));
  ImageRecord mixed;
  {
    py::gil_scoped_release release;
    const colmix::MixerSet& mixers = cached_mixers(mixer_dir);
    colmix::Rng rng = colmix::sample_rng(cfg.pixmix.seed, colmix::Stream::kPixMix, epoch, index);
    mixed = colmix::pixmix_augment(record, mixers, cfg.pixmix, rng);
  }
  return array_image(mixed);
}

py::tuple py_corrupt(const PixelArray& image, const std::string& kind, int severity, uint64_t seed,
                     const std::vector<PyBox>& boxes, size_t index) {
  const colmix::CorruptionSpec spec{colmix::parse_corruption_kind(kind), severity};
  spec.validate();
  cv::Mat pixels = to_mat(image);
  auto annotations = to_annotations(boxes, pixels, 1);
  cv::Mat out;
  {
    py::gil_scoped_release release;
    colmix::Rng rng = colmix::corruption_rng(seed, spec, index);
    out = colmix::corrupt_pixels(pixels, spec, rng);
  }
  return py::make_tuple(to_array(out), to_boxes(annotations));
}

std::vector<std::pair<std::string, std::string>> overrides_from(const py::object& mapping) {
  std::vector<std::pair<std::string, std::string>> out;
  if (mapping.is_none()) return out;
  for (const auto& [key, value] : mapping.cast<py::dict>()) {
    out.emplace_back(py::str(key).cast<std::string>(), setting_text(value));
  }
  return out;
}

// Runs a command with the GIL released and raises with its stderr on failure.
template <typename Options, typename Fn>
std::string run_command(const Options& options, Fn fn) {
  std::ostringstream out;
  std::ostringstream err;
  int code = 0;
  {
    py::gil_scoped_release release;
    code = fn(options, out, err);
  }
  if (code != 0) throw colmix::Error(err.str().empty() ? "command failed" : err.str());
  return out.str();
}

std::string augment(const std::string& mode, const fs::path& input, const fs::path& out, const py::object& config,
                    std::optional<uint64_t> seed, std::optional<size_t> epochs, size_t workers) {
  colmix::cli::AugmentOptions o;
  o.mode = mode;
  o.input.dir = input;
  o.out = out;
  o.common.overrides = overrides_from(config);
  o.common.seed = seed;
  o.common.epochs = epochs;
  o.common.workers = workers;
  o.common.argv = {"python", "augment", "--mode", mode};
  return run_command(o, colmix::cli::cmd_augment);
}

std::string corrupt(const fs::path& input, const fs::path& out, const std::vector<std::string>& kinds,
                    const std::vector<int>& severities, uint64_t seed, size_t workers) {
  colmix::cli::CorruptOptions o;
  o.input.dir = input;
  o.out = out;
  o.kinds = kinds;
  o.severities = severities;
  o.seed = seed;
  o.workers = workers;
  o.argv = {"python", "corrupt"};
  return run_command(o, colmix::cli::cmd_corrupt);
}

std::string evaluate(const fs::path& ground_truth, const fs::path& detections, std::optional<fs::path> grid,
                     std::optional<fs::path> out) {
  colmix::cli::EvalOptions o;
  o.ground_truth = ground_truth;
  o.detections = detections;
  o.grid_root = std::move(grid);
  o.out = std::move(out);
  o.argv = {"python", "eval"};
  return run_command(o, colmix::cli::cmd_eval);
}

}  // namespace

PYBIND11_MODULE(_colmix, m) {
  m.doc() = "Array-in/array-out bindings for the ColMix augmentation and corruption engine.";

  const auto& error = py::register_exception<colmix::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<colmix::ParseError>(m, "ParseError", error.ptr());
  py::register_exception<colmix::IoError>(m, "IoError", error.ptr());
  py::register_exception<colmix::ConfigError>(m, "ConfigError", error.ptr());
  py::register_exception<colmix::SelectionError>(m, "SelectionError", error.ptr());
  py::register_exception<colmix::ValidationError>(m, "ValidationError", error.ptr());

  m.def("py_collage", &py_collage, py::arg("samples"), py::arg("config") = py::none(), py::arg("seed") = 0,
        py::arg("index") = 0, py::arg("epoch") = 0,
        "Collage-paste onto samples[index] drawing from the whole batch. Returns (pixels, boxes).");
  m.def("py_pixmix", &py_pixmix, py::arg("image"), py::arg("mixer_dir"), py::arg("config") = py::none(),
        py::arg("seed") = 0, py::arg("boxes") = std::vector<PyBox>{}, py::arg("index") = 0, py::arg("epoch") = 0,
        "PixMix an image with mixing pictures from mixer_dir. Returns (pixels, boxes).");
  m.def("py_corrupt", &py_corrupt, py::arg("image"), py::arg("kind"), py::arg("severity"), py::arg("seed") = 0,
        py::arg("boxes") = std::vector<PyBox>{}, py::arg("index") = 0,
        "Apply one corruption at severity 1..5. Returns (pixels, boxes).");
  m.def("augment", &augment, py::arg("mode"), py::arg("input"), py::arg("out"), py::arg("config") = py::none(),
        py::arg("seed") = py::none(), py::arg("epochs") = py::none(), py::arg("workers") = 1);
  m.def("corrupt", &corrupt, py::arg("input"), py::arg("out"), py::arg("kinds") = std::vector<std::string>{},
        py::arg("severities") = std::vector<int>{}, py::arg("seed") = 0, py::arg("workers") = 1);
  m.def("evaluate", &evaluate, py::arg("ground_truth"), py::arg("detections"), py::arg("grid") = py::none(),
        py::arg("out") = py::none());

  py::list kinds;
  for (auto kind : colmix::kAllCorruptions) kinds.append(std::string(colmix::to_string(kind)));
  m.attr("CORRUPTIONS") = py::tuple(kinds);
  m.attr("__version__") = colmix::cli::kVersion;
}
