#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pedtrack/calibration.hpp"
#include "pedtrack/error.hpp"
#include "pedtrack/tracking.hpp"

namespace pedtrack {

struct KinematicsSample {
  std::size_t frame = 0;
  double t = 0.0;  // seconds
  double step_distance_m = 0.0;
  double cumulative_distance_m = 0.0;
  std::optional<double> velocity_mps;       // from the second sample on
  std::optional<double> acceleration_mps2;  // from the third sample on
};

struct KinematicsSeries {
  int track_id = 0;
  std::vector<KinematicsSample> samples;

  std::vector<double> velocities() const {
    std::vector<double> v;
    for (const auto& s : samples)
      if (s.velocity_mps) v.push_back(*s.velocity_mps);
    return v;
  }
};

inline double step_distance(Point2 prev, Point2 curr, const SceneCalibration& cal) noexcept {
  return displacement_to_meters(cal, curr.x - prev.x, curr.y - prev.y);
}

/// Per-step speeds, v_i = d_i / dt.
inline std::vector<double> velocity_series(std::span<const double> step_distances, double dt) {
  if (!(dt > 0.0)) throw ParameterError("dt must be positive");
  std::vector<double> v;
  v.reserve(step_distances.size());
  for (double d : step_distances) v.push_back(d / dt);
  return v;
}

/// Forward differences of speed, signed; one shorter than the input.
inline std::vector<double> acceleration_series(std::span<const double> velocities, double dt) {
  if (!(dt > 0.0)) throw ParameterError("dt must be positive");
  std::vector<double> a;
  for (std::size_t i = 0; i + 1 < velocities.size(); ++i) {
    a.push_back((velocities[i + 1] - velocities[i]) / dt);
  }
  return a;
}

/// Centered moving average with an odd window; edges average over the part
/// of the window that exists. Width 1 (or 0) is the identity.
inline std::vector<double> moving_average(std::span<const double> values, int window) {
  if (window <= 1) return {values.begin(), values.end()};
  if (window % 2 == 0) throw ParameterError("smoothing window must be odd");
  const long half = window / 2;
  const long n = static_cast<long>(values.size());
  std::vector<double> out(values.size());
  for (long i = 0; i < n; ++i) {
    const long lo = std::max(0L, i - half);
    const long hi = std::min(n - 1, i + half);
    double sum = 0.0;
    for (long j = lo; j <= hi; ++j) sum += values[j];
    out[i] = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

/// Each velocity/acceleration sample is stamped at the later frame of its
/// difference.
inline KinematicsSeries compile_series(int track_id, std::span<const TrackPoint> history,
                                       const SceneCalibration& cal) {
  if (history.empty()) throw ParameterError("track history is empty");
  const double dt = cal.frame_interval_s();
  std::vector<double> steps;
  for (std::size_t i = 1; i < history.size(); ++i) {
    steps.push_back(step_distance(history[i - 1].com, history[i].com, cal));
  }
  const auto v = velocity_series(steps, dt);
  const auto a = acceleration_series(v, dt);

  KinematicsSeries series{track_id, {}};
  double cumulative = 0.0;
  for (std::size_t i = 0; i < history.size(); ++i) {
    KinematicsSample s;
    s.frame = history[i].frame;
    s.t = static_cast<double>(s.frame) / cal.fps();
    if (i > 0) {
      s.step_distance_m = steps[i - 1];
      cumulative += steps[i - 1];
      s.velocity_mps = v[i - 1];
    }
    if (i > 1) s.acceleration_mps2 = a[i - 2];
    s.cumulative_distance_m = cumulative;
    series.samples.push_back(s);
  }
  return series;
}

inline KinematicsSeries compile_series(const Track& track, const SceneCalibration& cal) {
  return compile_series(track.id, track.history, cal);
}

}  // namespace pedtrack
