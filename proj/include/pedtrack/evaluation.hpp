#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pedtrack/calibration.hpp"
#include "pedtrack/error.hpp"
#include "pedtrack/kinematics.hpp"
#include "pedtrack/output.hpp"
#include "pedtrack/synth.hpp"

namespace pedtrack {

// ---------------------------------------------------------------------------
// Ground-truth CSV: actor_id,frame,x_px,y_px

inline constexpr std::string_view kTruthHeader = "actor_id,frame,x_px,y_px";

inline std::string export_truth_csv(const std::vector<ActorTruth>& truth) {
  std::string out(kTruthHeader);
  out += '\n';
  char buf[96];
  for (const auto& a : truth) {
    for (const auto& p : a.points) {
      std::snprintf(buf, sizeof buf, "%d,%zu,%.9g,%.9g\n", a.actor_id, p.frame, p.pos.x, p.pos.y);
      out += buf;
    }
  }
  return out;
}

inline std::vector<ActorTruth> parse_truth_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kTruthHeader) {
    throw LoadError("ground truth csv: unexpected header");
  }
  std::map<int, ActorTruth> by_id;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    const auto c = detail::split_csv_line(line);
    if (c.size() != 4) throw LoadError("truth line " + std::to_string(number) + ": expected 4 cells");
    const int id = static_cast<int>(detail::parse_cell(c[0], number));
    auto& a = by_id[id];
    a.actor_id = id;
    a.points.push_back({static_cast<std::size_t>(detail::parse_cell(c[1], number)),
                        {detail::parse_cell(c[2], number), detail::parse_cell(c[3], number)}});
  }
  std::vector<ActorTruth> out;
  for (auto& [id, a] : by_id) {
    std::sort(a.points.begin(), a.points.end(),
              [](const TruthPoint& x, const TruthPoint& y) { return x.frame < y.frame; });
    out.push_back(std::move(a));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Observed tracks, as recovered from a tracks CSV or built in memory

struct ObservedPoint {
  Point2 pos;
  std::optional<double> v_mps;
  double cum_m = 0.0;
};

struct ObservedTrack {
  int track_id = 0;
  std::map<std::size_t, ObservedPoint> by_frame;
};

inline std::vector<ObservedTrack> observed_from_rows(const std::vector<CsvRow>& rows) {
  std::map<int, ObservedTrack> by_id;
  for (const auto& r : rows) {
    auto& t = by_id[r.track_id];
    t.track_id = r.track_id;
    t.by_frame[r.frame] = {{r.x_px, r.y_px}, r.v_mps, r.cum_m};
  }
  std::vector<ObservedTrack> out;
  for (auto& [id, t] : by_id) out.push_back(std::move(t));
  return out;
}

inline std::vector<ObservedTrack> observed_from_tracks(const std::vector<Track>& tracks,
                                                       const SceneCalibration& cal) {
  std::vector<ObservedTrack> out;
  for (const auto& t : tracks) {
    const auto series = compile_series(t, cal);
    ObservedTrack o{t.id, {}};
    for (std::size_t i = 0; i < t.history.size(); ++i) {
      o.by_frame[t.history[i].frame] = {t.history[i].com, series.samples[i].velocity_mps,
                                        series.samples[i].cumulative_distance_m};
    }
    out.push_back(std::move(o));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Matching and metrics

struct VerifyBounds {
  double match_threshold_px = 10.0;
  double max_rmse_px = 2.0;
  double min_coverage = 0.95;
  int max_id_switches = 0;
  double max_speed_error_pct = 5.0;
};

struct ActorReport {
  int actor_id = 0;
  std::optional<int> track_id;
  std::size_t truth_frames = 0;
  std::size_t matched_frames = 0;
  double mean_distance_px = 0.0;
  double rmse_px = 0.0;
  double coverage = 0.0;
  int id_switches = 0;
  double truth_speed_mps = 0.0;
  double track_speed_mps = 0.0;
  std::optional<double> speed_error_pct;
  double cruise_speed_mps = 0.0;       // median of the matched track's speeds
  double min_speed_mps = 0.0;
  std::optional<double> min_speed_ratio;
  std::optional<double> net_to_cumulative;
};

struct VerifyReport {
  std::size_t track_count = 0;
  std::vector<ActorReport> actors;
  std::vector<std::string> failures;
  bool passed() const noexcept { return failures.empty(); }
};

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Greedy matcher: in actor order, each actor takes the still-unassigned
/// track with the smallest mean per-frame distance over shared frames.
/// An ID switch is a change of the nearest track between consecutive frames.
inline VerifyReport verify_tracks(const std::vector<ActorTruth>& truth,
                                  const std::vector<ObservedTrack>& tracks,
                                  const SceneCalibration& cal, const VerifyBounds& bounds = {}) {
  VerifyReport report;
  report.track_count = tracks.size();
  std::vector<bool> taken(tracks.size(), false);

  for (const auto& actor : truth) {
    ActorReport r;
    r.actor_id = actor.actor_id;
    r.truth_frames = actor.points.size();

    std::optional<std::size_t> best;
    double best_mean = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < tracks.size(); ++i) {
      if (taken[i]) continue;
      double sum = 0.0;
      std::size_t n = 0;
      for (const auto& p : actor.points) {
        if (auto it = tracks[i].by_frame.find(p.frame); it != tracks[i].by_frame.end()) {
          sum += distance(p.pos, it->second.pos);
          ++n;
        }
      }
      if (n > 0 && sum / n < best_mean) {
        best_mean = sum / n;
        best = i;
      }
    }

    // Nearest-track sequence for ID switches, over all tracks.
    std::optional<int> last_nearest;
    for (const auto& p : actor.points) {
      std::optional<int> nearest;
      double nearest_d = bounds.match_threshold_px;
      for (const auto& t : tracks) {
        if (auto it = t.by_frame.find(p.frame); it != t.by_frame.end()) {
          const double d = distance(p.pos, it->second.pos);
          if (d <= nearest_d) {
            nearest_d = d;
            nearest = t.track_id;
          }
        }
      }
      if (nearest && last_nearest && *nearest != *last_nearest) ++r.id_switches;
      if (nearest) last_nearest = nearest;
    }

    if (!best || best_mean > bounds.match_threshold_px) {
      report.failures.push_back("actor " + std::to_string(actor.actor_id) +
                                ": no track within " + std::to_string(bounds.match_threshold_px) +
                                " px");
      report.actors.push_back(r);
      continue;
    }
    taken[*best] = true;
    const auto& track = tracks[*best];
    r.track_id = track.track_id;
    r.mean_distance_px = best_mean;

    double sq = 0.0;
    double truth_path = 0.0;
    std::optional<Point2> prev;
    std::vector<double> speeds;
    for (const auto& p : actor.points) {
      if (prev) truth_path += step_distance(*prev, p.pos, cal);
      prev = p.pos;
      if (auto it = track.by_frame.find(p.frame); it != track.by_frame.end()) {
        const double d = distance(p.pos, it->second.pos);
        sq += d * d;
        ++r.matched_frames;
        if (it->second.v_mps) speeds.push_back(*it->second.v_mps);
      }
    }
    r.rmse_px = std::sqrt(sq / static_cast<double>(r.matched_frames));
    r.coverage = static_cast<double>(r.matched_frames) / static_cast<double>(r.truth_frames);
    if (actor.points.size() > 1) {
      r.truth_speed_mps = truth_path / static_cast<double>(actor.points.size() - 1) * cal.fps();
    }
    if (!speeds.empty()) {
      double sum = 0.0;
      for (double v : speeds) sum += v;
      r.track_speed_mps = sum / static_cast<double>(speeds.size());
      r.cruise_speed_mps = median(speeds);
      r.min_speed_mps = *std::min_element(speeds.begin(), speeds.end());
      if (r.cruise_speed_mps > 0.0) r.min_speed_ratio = r.min_speed_mps / r.cruise_speed_mps;
    }
    if (r.truth_speed_mps > 0.0) {
      r.speed_error_pct = std::abs(r.track_speed_mps - r.truth_speed_mps) / r.truth_speed_mps * 100.0;
    }
    const auto& first = track.by_frame.begin()->second;
    const auto& last = track.by_frame.rbegin()->second;
    if (last.cum_m > 0.0) {
      r.net_to_cumulative = step_distance(first.pos, last.pos, cal) / last.cum_m;
    }

    const std::string who = "actor " + std::to_string(actor.actor_id);
    if (r.rmse_px > bounds.max_rmse_px) {
      report.failures.push_back(who + ": rmse " + std::to_string(r.rmse_px) + " px");
    }
    if (r.coverage < bounds.min_coverage) {
      report.failures.push_back(who + ": coverage " + std::to_string(r.coverage));
    }
    if (r.id_switches > bounds.max_id_switches) {
      report.failures.push_back(who + ": " + std::to_string(r.id_switches) + " id switches");
    }
    if (r.speed_error_pct && *r.speed_error_pct > bounds.max_speed_error_pct) {
      report.failures.push_back(who + ": speed error " + std::to_string(*r.speed_error_pct) + " %");
    }
    report.actors.push_back(r);
  }
  return report;
}

}  // namespace pedtrack
