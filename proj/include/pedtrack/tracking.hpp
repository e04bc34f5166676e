#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pedtrack/detection.hpp"
#include "pedtrack/error.hpp"
#include "pedtrack/frame_io.hpp"

namespace pedtrack {

enum class PointFlag { measured, held };

inline const char* to_string(PointFlag f) noexcept {
  return f == PointFlag::measured ? "measured" : "held";
}

struct TrackPoint {
  Point2 com;
  std::size_t frame = 0;
  PointFlag flag = PointFlag::measured;
  BoundingBox box;
};

enum class TrackStatus { active, terminated };

struct Track {
  int id = 0;
  Rgb display_color;
  std::vector<TrackPoint> history;
  BoundingBox current_box;
  TrackStatus status = TrackStatus::active;
  std::optional<std::size_t> termination_frame;  // first frame without the head
  int consecutive_held = 0;

  bool active() const noexcept { return status == TrackStatus::active; }

  const TrackPoint* at_frame(std::size_t frame) const noexcept {
    if (history.empty() || frame < history.front().frame || frame > history.back().frame) {
      return nullptr;
    }
    return &history[frame - history.front().frame];
  }
};

/// Saturated golden-ratio hue walk; never dark enough to pass any black cap
/// below 200.
inline Rgb track_color(int id) {
  const double h = std::fmod(0.1 + 0.6180339887498949 * id, 1.0) * 6.0;
  const double s = 0.85;
  const double v = 0.95;
  const int sector = static_cast<int>(h) % 6;
  const double f = h - std::floor(h);
  const double p = v * (1 - s), q = v * (1 - s * f), t = v * (1 - s * (1 - f));
  double r = 0, g = 0, b = 0;
  switch (sector) {
    case 0: r = v; g = t; b = p; break;
    case 1: r = q; g = v; b = p; break;
    case 2: r = p; g = v; b = t; break;
    case 3: r = p; g = q; b = v; break;
    case 4: r = t; g = p; b = v; break;
    default: r = v; g = p; b = q; break;
  }
  const auto c = [](double x) { return static_cast<std::uint8_t>(std::lround(x * 255.0)); };
  return {c(r), c(g), c(b)};
}

struct TrackerOptions {
  int max_consecutive_held = 3;  // the Nth consecutive gate failure terminates
};

struct TrackerState {
  std::vector<Track> tracks;
  int next_id = 0;
  long frame_index = -1;  // last processed frame, -1 before the first
};

/// Advances every active track onto `frame` (ascending id), then admits new
/// heads found by a scan that treats the surviving boxes as claimed.
inline TrackerState step(TrackerState state, const Frame& frame, const DetectionParams& params,
                         const TrackerOptions& options = {}) {
  const long expected = state.frame_index + 1;
  if (static_cast<long>(frame.index()) != expected) {
    throw SequencingError("frame " + std::to_string(frame.index()) + " out of order, expected " +
                          std::to_string(expected));
  }
  params.validate();
  const BlackPixelIndex index(frame, params.black_max);
  const std::size_t f = frame.index();

  std::vector<BoundingBox> claimed;
  for (auto& track : state.tracks) {
    if (!track.active()) continue;
    const auto terminate = [&] {
      track.status = TrackStatus::terminated;
      track.termination_frame = f;
    };
    const auto located = relocate(index, track.current_box, params.vicinity_margin);
    if (!located) {
      terminate();
      continue;
    }
    const Point2 previous = track.history.back().com;
    TrackPoint point{located->com, f, PointFlag::measured, located->box};
    if (distance(previous, located->com) > params.max_step) {
      // Erroneous frame: keep the previous center and box.
      if (++track.consecutive_held >= options.max_consecutive_held) {
        terminate();
        continue;
      }
      point = {previous, f, PointFlag::held, track.current_box};
    } else {
      track.consecutive_held = 0;
    }
    if (index.count(point.box) < params.min_black_count) {
      terminate();
      continue;
    }
    track.current_box = point.box;
    track.history.push_back(point);
    claimed.push_back(track.current_box);
  }

  for (const auto& cand : scan_frame(index, params, claimed)) {
    Track t;
    t.id = state.next_id++;
    t.display_color = track_color(t.id);
    t.current_box = cand.box;
    t.history.push_back({cand.com, f, PointFlag::measured, cand.box});
    state.tracks.push_back(std::move(t));
  }
  state.frame_index = expected;
  return state;
}

/// Incremental driver over a frame stream.
class Tracker {
 public:
  explicit Tracker(DetectionParams params, TrackerOptions options = {})
      : params_(params), options_(options) {
    params_.validate();
  }

  void push(const Frame& frame) { state_ = step(std::move(state_), frame, params_, options_); }

  const TrackerState& state() const noexcept { return state_; }
  const std::vector<Track>& tracks() const noexcept { return state_.tracks; }
  std::vector<Track> release() && { return std::move(state_.tracks); }

 private:
  DetectionParams params_;
  TrackerOptions options_;
  TrackerState state_;
};

inline bool is_out_of_scene(const Frame& frame, const BoundingBox& box,
                            const DetectionParams& params) {
  return count_black_pixels(frame, box, params.black_max) < params.min_black_count;
}

inline std::vector<Track> run(const FrameSequence& sequence, const DetectionParams& params,
                              const TrackerOptions& options = {}) {
  if (sequence.frames.empty()) throw ParameterError("cannot track an empty sequence");
  Tracker tracker(params, options);
  for (const auto& frame : sequence.frames) tracker.push(frame);
  return std::move(tracker).release();
}

}  // namespace pedtrack
