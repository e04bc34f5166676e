#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "pedtrack/calibration.hpp"
#include "pedtrack/detection.hpp"
#include "pedtrack/error.hpp"
#include "pedtrack/evaluation.hpp"
#include "pedtrack/synth.hpp"

namespace pedtrack {

/// Flat `key = value` file; `#` starts a comment. Later keys win.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::string_view text) {
    KeyValueConfig cfg;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
      ++number;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      const auto eq = line.find('=');
      const auto key = trim(line.substr(0, eq));
      if (eq == std::string::npos) {
        if (!key.empty()) {
          throw ConfigError("config line " + std::to_string(number) + ": expected key = value");
        }
        continue;
      }
      if (key.empty()) throw ConfigError("config line " + std::to_string(number) + ": empty key");
      cfg.values_[key] = trim(line.substr(eq + 1));
    }
    return cfg;
  }

  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::optional<std::string> get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<double> real(const std::string& key) const {
    const auto v = get(key);
    if (!v) return std::nullopt;
    try {
      std::size_t used = 0;
      const double d = std::stod(*v, &used);
      if (used == v->size()) return d;
    } catch (const std::exception&) {
    }
    throw ConfigError("config key '" + key + "': expected a number, got '" + *v + "'");
  }

  std::optional<int> integer(const std::string& key) const {
    const auto v = get(key);
    if (!v) return std::nullopt;
    try {
      std::size_t used = 0;
      const int i = std::stoi(*v, &used);
      if (used == v->size()) return i;
    } catch (const std::exception&) {
    }
    throw ConfigError("config key '" + key + "': expected an integer, got '" + *v + "'");
  }

  std::optional<bool> boolean(const std::string& key) const {
    const auto v = get(key);
    if (!v) return std::nullopt;
    if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
    if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
    throw ConfigError("config key '" + key + "': expected true/false, got '" + *v + "'");
  }

  const std::map<std::string, std::string>& values() const noexcept { return values_; }

 private:
  static std::string trim(std::string s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
  }

  std::map<std::string, std::string> values_;
};

enum class InputKind { frames_dir, scenario, script };

struct CalibrationOverrides {
  std::optional<double> scene_width_m, scene_height_m, mount_height_m, fps;
  std::optional<int> image_width_px, image_height_px;
};

struct RunConfig {
  InputKind input_kind = InputKind::scenario;
  std::string input;  // directory, builtin name, or script path
  std::optional<std::string> preset;
  std::map<std::string, int> param_overrides;
  std::string calibration_base = "corridor";
  CalibrationOverrides calibration;
  std::filesystem::path output_dir = "out";
  std::string run_name = "run";
  bool annotate = true;
  int annotate_stride = 1;
  bool csv = true;
  bool charts = true;
  int smoothing_window = 1;
  bool group_coloring = true;
  std::optional<double> distance_offset_m;
  VerifyBounds bounds;
};

inline const std::vector<std::string>& detection_param_keys() {
  static const std::vector<std::string> keys{"box_w",           "box_h",          "black_max",
                                             "min_black_count", "vicinity_margin", "max_step",
                                             "overlap_margin",  "scan_stride"};
  return keys;
}

inline void apply_param_override(DetectionParams& p, const std::string& key, int v) {
  if (key == "box_w") p.box_w = v;
  else if (key == "box_h") p.box_h = v;
  else if (key == "black_max") p.black_max = v;
  else if (key == "min_black_count") p.min_black_count = v;
  else if (key == "vicinity_margin") p.vicinity_margin = v;
  else if (key == "max_step") p.max_step = v;
  else if (key == "overlap_margin") p.overlap_margin = v;
  else if (key == "scan_stride") p.scan_stride = v;
}

/// Builds a run configuration. Relative paths inside the file resolve against
/// `base_dir` (the config file's directory).
inline RunConfig make_run_config(const KeyValueConfig& kv, const std::filesystem::path& base_dir = {}) {
  static const std::vector<std::string> known{
      "frames_dir",      "scenario",        "script",          "preset",
      "calibration",     "scene_width_m",   "scene_height_m",  "image_width_px",
      "image_height_px", "mount_height_m",  "fps",             "output_dir",
      "run_name",        "annotate",        "annotate_stride", "csv",
      "charts",          "smoothing_window", "group_coloring", "distance_offset_m",
      "match_threshold_px", "max_rmse_px",  "min_coverage",    "max_id_switches",
      "max_speed_error_pct"};
  for (const auto& [key, value] : kv.values()) {
    const auto& pk = detection_param_keys();
    if (std::find(known.begin(), known.end(), key) == known.end() &&
        std::find(pk.begin(), pk.end(), key) == pk.end()) {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }

  RunConfig cfg;
  const auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return (path.is_absolute() || base_dir.empty() ? path : base_dir / path).string();
  };
  int sources = 0;
  if (auto v = kv.get("frames_dir")) {
    cfg.input_kind = InputKind::frames_dir;
    cfg.input = resolve(*v);
    ++sources;
  }
  if (auto v = kv.get("scenario")) {
    cfg.input_kind = InputKind::scenario;
    cfg.input = *v;
    ++sources;
  }
  if (auto v = kv.get("script")) {
    cfg.input_kind = InputKind::script;
    cfg.input = resolve(*v);
    ++sources;
  }
  if (sources != 1) {
    throw ConfigError("exactly one of frames_dir, scenario, script must be set (found " +
                      std::to_string(sources) + ")");
  }

  cfg.preset = kv.get("preset");
  if (cfg.preset) {
    try {
      preset_by_name(*cfg.preset);
    } catch (const ParameterError& e) {
      throw ConfigError(e.what());
    }
  }
  for (const auto& key : detection_param_keys()) {
    if (auto v = kv.integer(key)) cfg.param_overrides[key] = *v;
  }

  if (auto v = kv.get("calibration")) {
    if (*v != "corridor" && *v != "lobby") {
      throw ConfigError("calibration must be corridor or lobby, got '" + *v + "'");
    }
    cfg.calibration_base = *v;
  }
  cfg.calibration.scene_width_m = kv.real("scene_width_m");
  cfg.calibration.scene_height_m = kv.real("scene_height_m");
  cfg.calibration.mount_height_m = kv.real("mount_height_m");
  cfg.calibration.fps = kv.real("fps");
  cfg.calibration.image_width_px = kv.integer("image_width_px");
  cfg.calibration.image_height_px = kv.integer("image_height_px");

  if (auto v = kv.get("output_dir")) cfg.output_dir = resolve(*v);
  if (auto v = kv.get("run_name")) {
    if (v->empty() || v->find_first_of("/\\") != std::string::npos) {
      throw ConfigError("run_name must be a plain file stem");
    }
    cfg.run_name = *v;
  }
  cfg.annotate = kv.boolean("annotate").value_or(cfg.annotate);
  cfg.annotate_stride = kv.integer("annotate_stride").value_or(cfg.annotate_stride);
  if (cfg.annotate_stride <= 0) throw ConfigError("annotate_stride must be positive");
  cfg.csv = kv.boolean("csv").value_or(cfg.csv);
  cfg.charts = kv.boolean("charts").value_or(cfg.charts);
  cfg.smoothing_window = kv.integer("smoothing_window").value_or(cfg.smoothing_window);
  if (cfg.smoothing_window < 1 || cfg.smoothing_window % 2 == 0) {
    throw ConfigError("smoothing_window must be a positive odd integer");
  }
  cfg.group_coloring = kv.boolean("group_coloring").value_or(cfg.group_coloring);
  cfg.distance_offset_m = kv.real("distance_offset_m");

  cfg.bounds.match_threshold_px = kv.real("match_threshold_px").value_or(cfg.bounds.match_threshold_px);
  cfg.bounds.max_rmse_px = kv.real("max_rmse_px").value_or(cfg.bounds.max_rmse_px);
  cfg.bounds.min_coverage = kv.real("min_coverage").value_or(cfg.bounds.min_coverage);
  cfg.bounds.max_id_switches = kv.integer("max_id_switches").value_or(cfg.bounds.max_id_switches);
  cfg.bounds.max_speed_error_pct =
      kv.real("max_speed_error_pct").value_or(cfg.bounds.max_speed_error_pct);
  return cfg;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return make_run_config(KeyValueConfig::parse(buf.str()), path.parent_path());
}

/// Preset (explicit, or the builtin scenario's default, else scenario 1)
/// with any per-key overrides applied on top.
inline DetectionParams resolve_params(const RunConfig& cfg) {
  DetectionParams p;
  if (cfg.preset) {
    p = preset_by_name(*cfg.preset);
  } else if (cfg.input_kind == InputKind::scenario) {
    p = default_params_for(cfg.input);
  } else {
    p = preset(1);
  }
  for (const auto& [key, v] : cfg.param_overrides) apply_param_override(p, key, v);
  try {
    p.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("detection parameters: ") + e.what());
  }
  return p;
}

/// Calibration for frames of the given size; image dimensions default to the
/// frames' and must match them when given explicitly.
inline SceneCalibration resolve_calibration(const RunConfig& cfg, int frame_w, int frame_h,
                                            double default_fps) {
  const auto& o = cfg.calibration;
  const SceneCalibration base =
      cfg.calibration_base == "lobby" ? SceneCalibration::lobby() : SceneCalibration::corridor();
  const int w = o.image_width_px.value_or(frame_w);
  const int h = o.image_height_px.value_or(frame_h);
  if (w != frame_w || h != frame_h) {
    throw ConfigError("calibration image size " + std::to_string(w) + "x" + std::to_string(h) +
                      " does not match frames " + std::to_string(frame_w) + "x" +
                      std::to_string(frame_h));
  }
  try {
    return SceneCalibration(o.scene_width_m.value_or(base.scene_width_m()),
                            o.scene_height_m.value_or(base.scene_height_m()), w, h,
                            o.mount_height_m.value_or(base.mount_height_m()),
                            o.fps.value_or(default_fps));
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("calibration: ") + e.what());
  }
}

}  // namespace pedtrack
