#pragma once

#include <cmath>

#include "pedtrack/error.hpp"

namespace pedtrack {

struct MetersPerPixel {
  double sx = 0.0;
  double sy = 0.0;
};

/// Projected captured-area rectangle over the image raster. The scene
/// dimensions are the floor area after the lens perspective correction, so a
/// single scale per axis maps pixels to meters.
class SceneCalibration {
 public:
  SceneCalibration(double scene_width_m, double scene_height_m, int image_width_px,
                   int image_height_px, double mount_height_m = 3.5, double fps = 30.0)
      : scene_width_m_(scene_width_m),
        scene_height_m_(scene_height_m),
        image_width_px_(image_width_px),
        image_height_px_(image_height_px),
        mount_height_m_(mount_height_m),
        fps_(fps) {
    if (!(scene_width_m > 0.0) || !(scene_height_m > 0.0) || image_width_px <= 0 ||
        image_height_px <= 0 || !(mount_height_m > 0.0) || !(fps > 0.0) ||
        !std::isfinite(scene_width_m) || !std::isfinite(scene_height_m) ||
        !std::isfinite(fps)) {
      throw ParameterError("calibration dimensions must be finite and strictly positive");
    }
  }

  /// Hallway scene: 2.0 x 1.5 m captured from 3.5 m.
  static SceneCalibration corridor(int width_px = 640, int height_px = 480, double fps = 30.0) {
    return {2.0, 1.5, width_px, height_px, 3.5, fps};
  }

  /// Lobby scene: 2.5 x 1.8 m captured from 3.9 m.
  static SceneCalibration lobby(int width_px = 640, int height_px = 480, double fps = 30.0) {
    return {2.5, 1.8, width_px, height_px, 3.9, fps};
  }

  double scene_width_m() const noexcept { return scene_width_m_; }
  double scene_height_m() const noexcept { return scene_height_m_; }
  int image_width_px() const noexcept { return image_width_px_; }
  int image_height_px() const noexcept { return image_height_px_; }
  double mount_height_m() const noexcept { return mount_height_m_; }
  double fps() const noexcept { return fps_; }
  double frame_interval_s() const noexcept { return 1.0 / fps_; }

 private:
  double scene_width_m_;
  double scene_height_m_;
  int image_width_px_;
  int image_height_px_;
  double mount_height_m_;
  double fps_;
};

inline MetersPerPixel meters_per_pixel(const SceneCalibration& cal) noexcept {
  return {cal.scene_width_m() / cal.image_width_px(), cal.scene_height_m() / cal.image_height_px()};
}

// Axis scaling happens before the Euclidean norm; sx and sy differ whenever
// the scene aspect ratio differs from the raster's.
inline double displacement_to_meters(const SceneCalibration& cal, double dx_px, double dy_px) noexcept {
  const auto [sx, sy] = meters_per_pixel(cal);
  return std::hypot(dx_px * sx, dy_px * sy);
}

}  // namespace pedtrack
