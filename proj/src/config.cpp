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

#include "colmix/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "colmix/error.hpp"

namespace colmix {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("invalid value '" + std::string(text) + "' for " + std::string(key));
  }
  return value;
}

double parse_double(std::string_view key, std::string_view text) {
  const std::string s(trim(text));
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid value '" + s + "' for " + std::string(key));
  }
}

std::vector<std::string> split_list(std::string_view text) {
  std::string cleaned;
  for (char c : text) {
    if (c == '[' || c == ']') continue;
    cleaned += (c == ',' ? ' ' : c);
  }
  std::istringstream in(cleaned);
  std::vector<std::string> out;
  for (std::string item; in >> item;) out.push_back(item);
  return out;
}

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

void RunConfig::set_seed(uint64_t seed) {
  collage.seed = seed;
  pixmix.seed = seed;
}

void RunConfig::validate() const {
  collage.validate();
  pixmix.validate();
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (mosaic_cols < 1 || mosaic_cols > 4 || mosaic_rows < 1 || mosaic_rows > 4) {
    throw ConfigError("mosaic_grid dimensions must be in 1..4");
  }
}

std::string normalize_key(std::string_view key) {
  std::string out;
  for (char c : key) {
    if (c == '_' || c == '-') continue;
    out += char(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view text, const std::string& origin) {
  std::vector<std::pair<std::string, std::string>> out;
  size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    auto sep = view.find('=');
    if (sep == std::string_view::npos) sep = view.find(':');
    if (sep == std::string_view::npos) {
      throw ParseError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(view.substr(0, sep));
    if (key.empty()) throw ParseError(origin + ":" + std::to_string(line_no) + ": empty key");
    out.emplace_back(std::string(key), std::string(trim(view.substr(sep + 1))));
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> read_key_values(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open config file: " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_key_values(buf.str(), file.string());
}

void apply_setting(RunConfig& c, std::string_view key, std::string_view value) {
  const std::string k = normalize_key(key);
  if (k == "profile") {
    const std::string v = normalize_key(value);
    const uint64_t seed = c.seed();
    if (v == "rareplanes") {
      c.collage = CollageConfig::rareplanes();
    } else if (v == "xview39" || v == "xview") {
      c.collage = CollageConfig::xview39();
    } else {
      throw ConfigError("unknown profile '" + std::string(value) + "' (expected rareplanes or xview39)");
    }
    c.set_seed(seed);
  } else if (k == "targetdensity") {
    const auto parts = split_list(value);
    if (parts.size() != 2) throw ConfigError("TargetDensity expects two values 'lo, hi'");
    c.collage.target_density_lo = parse_double(key, parts[0]);
    c.collage.target_density_hi = parse_double(key, parts[1]);
  } else if (k == "targetdensitylo") {
    c.collage.target_density_lo = parse_double(key, value);
  } else if (k == "targetdensityhi") {
    c.collage.target_density_hi = parse_double(key, value);
  } else if (k == "minsize") {
    c.collage.min_size = parse_number<int>(key, value);
  } else if (k == "maxdilation") {
    c.collage.max_dilation = parse_number<int>(key, value);
  } else if (k == "maxexpansions") {
    c.collage.max_expansions = parse_number<int>(key, value);
  } else if (k == "minstep") {
    c.collage.min_step = parse_number<int>(key, value);
  } else if (k == "maxstep") {
    c.collage.max_step = parse_number<int>(key, value);
  } else if (k == "occlusiontol") {
    c.collage.occlusion_tol = parse_number<int64_t>(key, value);
  } else if (k == "bboxthreshold") {
    c.collage.bbox_threshold = parse_double(key, value);
  } else if (k == "basemode") {
    c.collage.base_mode = parse_base_mode(std::string(trim(value)));
  } else if (k == "canvasfill") {
    const int fill = parse_number<int>(key, value);
    if (fill < 0 || fill > 255) throw ConfigError("canvas_fill must be in 0..255");
    c.collage.canvas_fill = uint8_t(fill);
  } else if (k == "seed") {
    c.set_seed(parse_number<uint64_t>(key, value));
  } else if (k == "epochs") {
    c.epochs = parse_number<size_t>(key, value);
  } else if (k == "pixmixrounds" || k == "maxrounds") {
    c.pixmix.max_rounds = parse_number<int>(key, value);
  } else if (k == "pixmixbeta" || k == "blendstrength") {
    c.pixmix.blend_strength = parse_double(key, value);
  } else if (k == "pixmixops") {
    c.pixmix.additive = false;
    c.pixmix.multiplicative = false;
    for (const auto& op : split_list(value)) {
      if (op == "additive") {
        c.pixmix.additive = true;
      } else if (op == "multiplicative") {
        c.pixmix.multiplicative = true;
      } else {
        throw ConfigError("unknown pixmix op '" + op + "'");
      }
    }
  } else if (k == "mixers" || k == "mixerdir") {
    c.mixer_dir = std::filesystem::path(std::string(trim(value)));
  } else if (k == "mosaicgrid") {
    const std::string v(trim(value));
    const auto x = v.find_first_of("xX");
    if (x == std::string::npos) throw ConfigError("mosaic_grid expects 'COLSxROWS'");
    c.mosaic_cols = parse_number<int>(key, std::string_view(v).substr(0, x));
    c.mosaic_rows = parse_number<int>(key, std::string_view(v).substr(x + 1));
  } else if (k == "bboxpastecount") {
    c.bbox_paste_count = parse_number<size_t>(key, value);
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

RunConfig run_config_from(const std::vector<std::pair<std::string, std::string>>& settings) {
  RunConfig config;
  for (const auto& [k, v] : settings) {
    if (normalize_key(k) == "profile") apply_setting(config, k, v);
  }
  for (const auto& [k, v] : settings) {
    if (normalize_key(k) != "profile") apply_setting(config, k, v);
  }
  return config;
}

RunConfig load_run_config(const std::filesystem::path& file) { return run_config_from(read_key_values(file)); }

std::vector<std::pair<std::string, std::string>> describe(const RunConfig& c) {
  std::vector<std::pair<std::string, std::string>> out = {
      {"TargetDensity", format_double(c.collage.target_density_lo) + ", " + format_double(c.collage.target_density_hi)},
      {"MinSize", std::to_string(c.collage.min_size)},
      {"MaxDilation", std::to_string(c.collage.max_dilation)},
      {"MaxExpansions", std::to_string(c.collage.max_expansions)},
      {"MinStep", std::to_string(c.collage.min_step)},
      {"MaxStep", std::to_string(c.collage.max_step)},
      {"OcclusionTol", std::to_string(c.collage.occlusion_tol)},
      {"BBoxThreshold", format_double(c.collage.bbox_threshold)},
      {"base_mode", to_string(c.collage.base_mode)},
      {"canvas_fill", std::to_string(int(c.collage.canvas_fill))},
      {"seed", std::to_string(c.collage.seed)},
      {"epochs", std::to_string(c.epochs)},
      {"pixmix_rounds", std::to_string(c.pixmix.max_rounds)},
      {"pixmix_beta", format_double(c.pixmix.blend_strength)},
  };
  std::string ops;
  if (c.pixmix.additive) ops = "additive";
  if (c.pixmix.multiplicative) ops += ops.empty() ? "multiplicative" : ",multiplicative";
  out.emplace_back("pixmix_ops", ops);
  if (c.mixer_dir) out.emplace_back("mixers", c.mixer_dir->string());
  out.emplace_back("mosaic_grid", std::to_string(c.mosaic_cols) + "x" + std::to_string(c.mosaic_rows));
  out.emplace_back("bbox_paste_count", std::to_string(c.bbox_paste_count));
  return out;
}

std::string render_config(const RunConfig& config) {
  std::string out;
  for (const auto& [k, v] : describe(config)) out += k + " = " + v + "\n";
  return out;
}

}  // namespace colmix
