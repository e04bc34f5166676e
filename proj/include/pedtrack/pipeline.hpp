#pragma once

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pedtrack/calibration.hpp"
#include "pedtrack/config.hpp"
#include "pedtrack/detection.hpp"
#include "pedtrack/error.hpp"
#include "pedtrack/evaluation.hpp"
#include "pedtrack/frame_io.hpp"
#include "pedtrack/kinematics.hpp"
#include "pedtrack/output.hpp"
#include "pedtrack/synth.hpp"
#include "pedtrack/tracking.hpp"

namespace pedtrack {

/// Random-access frames without holding the whole sequence in memory.
struct FrameSource {
  std::size_t count = 0;
  int width = 0;
  int height = 0;
  double fps = 30.0;
  std::function<Frame(std::size_t)> get;
};

inline FrameSource directory_source(const std::filesystem::path& dir, double fps) {
  auto files = list_frame_files(dir);
  const Frame first = read_frame(files.front());
  FrameSource src;
  src.count = files.size();
  src.width = first.width();
  src.height = first.height();
  src.fps = fps;
  src.get = [files = std::move(files), w = src.width, h = src.height, fps](std::size_t k) {
    Frame f = read_frame(files.at(k));
    if (f.width() != w || f.height() != h) {
      throw LoadError("mixed frame dimensions: " + files[k].filename().string());
    }
    f.set_index(k, fps);
    return f;
  };
  return src;
}

inline FrameSource script_source(ScenarioScript script) {
  script.validate();
  FrameSource src;
  src.count = script.n_frames;
  src.width = script.width;
  src.height = script.height;
  src.fps = script.fps;
  src.get = [s = std::move(script)](std::size_t k) { return render_frame(s, k); };
  return src;
}

/// PEDTRACK_SEED, when set, replaces the script's jitter seed.
inline void apply_seed_override(ScenarioScript& script) {
  if (const char* env = std::getenv("PEDTRACK_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used == std::string(env).size()) {
        script.seed = v;
        return;
      }
    } catch (const std::exception&) {
    }
    throw ConfigError(std::string("PEDTRACK_SEED is not an unsigned integer: ") + env);
  }
}

inline ScenarioScript resolve_script(const std::string& name_or_path) {
  ScenarioScript script;
  if (auto builtin = find_builtin(name_or_path)) {
    script = std::move(*builtin);
  } else if (std::filesystem::is_regular_file(name_or_path)) {
    script = load_script(name_or_path);
  } else {
    std::string names;
    for (const auto& n : builtin_names()) names += (names.empty() ? "" : ", ") + n;
    throw ConfigError("unknown scenario '" + name_or_path + "' (valid: " + names +
                      ", or a script file)");
  }
  apply_seed_override(script);
  return script;
}

// ---------------------------------------------------------------------------
// synth

struct SynthResult {
  std::size_t frames_written = 0;
  std::size_t actors = 0;
  std::filesystem::path truth_path;
};

/// Writes `frame_<NNN>.ppm`, `ground_truth.csv` and the script itself
/// (`scenario.txt`) into `out_dir`.
inline SynthResult cmd_synth(const std::string& name_or_script, const std::filesystem::path& out_dir) {
  const ScenarioScript script = resolve_script(name_or_script);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw IoError("cannot create output directory " + out_dir.string());
  }
  const int digits = std::max<int>(3, static_cast<int>(std::to_string(script.n_frames - 1).size()));
  for (std::size_t k = 0; k < script.n_frames; ++k) {
    std::ostringstream name;
    name << "frame_" << std::setw(digits) << std::setfill('0') << k << ".ppm";
    write_frame(out_dir / name.str(), render_frame(script, k));
  }
  SynthResult r;
  r.frames_written = script.n_frames;
  r.actors = script.actors.size();
  r.truth_path = out_dir / "ground_truth.csv";
  write_text(r.truth_path, export_truth_csv(ground_truth(script)));
  write_text(out_dir / "scenario.txt", format_script(script));
  return r;
}

// ---------------------------------------------------------------------------
// track

struct TrackRunResult {
  std::size_t frames_processed = 0;
  std::vector<Track> tracks;
  std::vector<KinematicsSeries> series;
  std::optional<SceneCalibration> calibration;
  DetectionParams params;
  std::vector<std::filesystem::path> outputs;
  double wall_time_s = 0.0;

  std::size_t terminated() const {
    return static_cast<std::size_t>(std::count_if(tracks.begin(), tracks.end(),
                                                  [](const Track& t) { return !t.active(); }));
  }
};

inline FrameSource open_source(const RunConfig& cfg) {
  switch (cfg.input_kind) {
    case InputKind::frames_dir:
      return directory_source(cfg.input, cfg.calibration.fps.value_or(30.0));
    default: {
      ScenarioScript script = resolve_script(cfg.input);
      if (cfg.calibration.fps) script.fps = *cfg.calibration.fps;
      return script_source(std::move(script));
    }
  }
}

inline std::string annotated_name(const std::string& run, std::size_t k, std::size_t total) {
  const int digits = std::max<int>(3, static_cast<int>(std::to_string(total - 1).size()));
  std::ostringstream name;
  name << run << "_annotated_" << std::setw(digits) << std::setfill('0') << k << ".ppm";
  return name.str();
}

/// load -> track -> kinematics -> outputs. Every file lands in output_dir.
inline TrackRunResult cmd_track(const RunConfig& cfg) {
  const auto started = std::chrono::steady_clock::now();
  TrackRunResult result;
  const FrameSource source = open_source(cfg);
  result.params = resolve_params(cfg);
  result.calibration = resolve_calibration(cfg, source.width, source.height, source.fps);
  const SceneCalibration& cal = *result.calibration;

  Tracker tracker(result.params);
  for (std::size_t k = 0; k < source.count; ++k) {
    Frame f = source.get(k);
    f.set_index(k, cal.fps());
    tracker.push(f);
  }
  result.frames_processed = source.count;
  result.tracks = std::move(tracker).release();
  for (const auto& t : result.tracks) result.series.push_back(compile_series(t, cal));

  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec || !std::filesystem::is_directory(cfg.output_dir)) {
    throw IoError("cannot create output directory " + cfg.output_dir.string());
  }
  AnnotationStyle style;
  style.group_coloring = cfg.group_coloring;

  if (cfg.csv) {
    const auto path = cfg.output_dir / (cfg.run_name + "_tracks.csv");
    write_text(path, export_csv(result.series, result.tracks, cal));
    result.outputs.push_back(path);
  }
  if (cfg.charts && !result.tracks.empty()) {
    ChartOptions opts = chart_options_for(result.tracks, cal, style);
    if (cfg.distance_offset_m) opts.rl_distance_offset_m = *cfg.distance_offset_m;
    opts.smoothing_window = cfg.smoothing_window;
    for (auto q : {ChartQuantity::distance, ChartQuantity::velocity, ChartQuantity::acceleration}) {
      ChartDocument doc;
      try {
        doc = render_chart(result.series, q, opts);
      } catch (const ChartError&) {
        continue;  // e.g. every track too short to have an acceleration sample
      }
      const auto stem = cfg.run_name + "_" + to_string(q);
      write_text(cfg.output_dir / (stem + ".svg"), doc.svg);
      write_text(cfg.output_dir / (stem + ".dat"), doc.data);
      result.outputs.push_back(cfg.output_dir / (stem + ".svg"));
      result.outputs.push_back(cfg.output_dir / (stem + ".dat"));
    }
  }
  if (cfg.annotate) {
    for (std::size_t k = 0; k < source.count; k += static_cast<std::size_t>(cfg.annotate_stride)) {
      Frame f = source.get(k);
      f.set_index(k, cal.fps());
      const auto path = cfg.output_dir / annotated_name(cfg.run_name, k, source.count);
      write_frame(path, annotate_frame(f, result.tracks, style));
      result.outputs.push_back(path);
    }
  }
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

inline std::string summary_text(const TrackRunResult& r) {
  std::ostringstream o;
  o << "frames processed: " << r.frames_processed << "\n"
    << "tracks created:   " << r.tracks.size() << "\n"
    << "tracks terminated: " << r.terminated() << "\n"
    << "outputs written:  " << r.outputs.size() << "\n"
    << "wall time:        " << std::fixed << std::setprecision(3) << r.wall_time_s << " s\n";
  return o.str();
}

// ---------------------------------------------------------------------------
// verify

inline nlohmann::json report_to_json(const VerifyReport& report) {
  using nlohmann::json;
  const auto opt = [](const std::optional<double>& v) -> json { return v ? json(*v) : json(nullptr); };
  json j;
  j["track_count"] = report.track_count;
  j["passed"] = report.passed();
  j["failures"] = report.failures;
  j["actors"] = json::array();
  for (const auto& a : report.actors) {
    j["actors"].push_back({{"actor_id", a.actor_id},
                           {"track_id", a.track_id ? json(*a.track_id) : json(nullptr)},
                           {"truth_frames", a.truth_frames},
                           {"matched_frames", a.matched_frames},
                           {"mean_distance_px", a.mean_distance_px},
                           {"rmse_px", a.rmse_px},
                           {"coverage", a.coverage},
                           {"id_switches", a.id_switches},
                           {"truth_speed_mps", a.truth_speed_mps},
                           {"track_speed_mps", a.track_speed_mps},
                           {"speed_error_pct", opt(a.speed_error_pct)},
                           {"cruise_speed_mps", a.cruise_speed_mps},
                           {"min_speed_mps", a.min_speed_mps},
                           {"min_speed_ratio", opt(a.min_speed_ratio)},
                           {"net_to_cumulative", opt(a.net_to_cumulative)}});
  }
  return j;
}

/// Compares `<run>_tracks.csv` in the output directory against a ground-truth
/// CSV and writes `<run>_verify.json` next to it.
inline VerifyReport cmd_verify(const RunConfig& cfg, const std::filesystem::path& truth_path) {
  const auto tracks_path = cfg.output_dir / (cfg.run_name + "_tracks.csv");
  const auto rows = parse_tracks_csv(read_text(tracks_path));
  const auto truth = parse_truth_csv(read_text(truth_path));
  const FrameSource source = open_source(cfg);
  const SceneCalibration cal = resolve_calibration(cfg, source.width, source.height, source.fps);
  VerifyReport report = verify_tracks(truth, observed_from_rows(rows), cal, cfg.bounds);
  write_text(cfg.output_dir / (cfg.run_name + "_verify.json"), report_to_json(report).dump(2) + "\n");
  return report;
}

}  // namespace pedtrack
