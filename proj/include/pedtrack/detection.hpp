#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pedtrack/error.hpp"
#include "pedtrack/frame_io.hpp"

namespace pedtrack {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double distance(Point2 a, Point2 b) noexcept { return std::hypot(b.x - a.x, b.y - a.y); }

/// Detection and tracking thresholds, one row of the per-scenario table plus
/// the scan stride.
struct DetectionParams {
  int box_w = 50;
  int box_h = 50;
  int black_max = 25;        // inclusive per-channel cap for a black pixel
  int min_black_count = 300;
  int vicinity_margin = 0;
  int max_step = 17;         // L2 gate on consecutive centers of mass, px
  int overlap_margin = 7;
  int scan_stride = 10;

  void validate() const {
    if (box_w <= 0 || box_h <= 0) throw ParameterError("box dimensions must be positive");
    if (black_max < 0 || black_max > 255) throw ParameterError("black_max must be in 0..255");
    if (min_black_count <= 0) throw ParameterError("min_black_count must be positive");
    if (static_cast<long>(min_black_count) > static_cast<long>(box_w) * box_h) {
      throw ParameterError("min_black_count exceeds box area");
    }
    if (vicinity_margin < 0) throw ParameterError("vicinity_margin must be nonnegative");
    if (max_step <= 0) throw ParameterError("max_step must be positive");
    if (overlap_margin < 0 || overlap_margin >= std::min(box_w, box_h)) {
      throw ParameterError("overlap_margin must be in [0, min(box_w, box_h))");
    }
    if (scan_stride <= 0) throw ParameterError("scan_stride must be positive");
  }

  friend bool operator==(const DetectionParams&, const DetectionParams&) = default;
};

/// Shipped presets for scenarios 1..4 (box, black cap, min count, vicinity,
/// max step, overlap margin).
inline DetectionParams preset(int scenario) {
  switch (scenario) {
    case 1: return {50, 50, 25, 300, 0, 17, 7, 10};
    case 2: return {50, 50, 22, 450, 6, 30, 20, 10};
    case 3: return {40, 40, 30, 600, 0, 30, 20, 10};
    case 4: return {40, 40, 30, 450, 0, 30, 20, 10};
    default: throw ParameterError("unknown preset scenario " + std::to_string(scenario));
  }
}

/// Accepts "scenario1".."scenario4" and the short forms "s1".."s4".
inline DetectionParams preset_by_name(std::string_view name) {
  for (int i = 1; i <= 4; ++i) {
    const std::string n = std::to_string(i);
    if (name == "scenario" + n || name == "s" + n) return preset(i);
  }
  throw ParameterError("unknown preset '" + std::string(name) +
                       "' (valid: scenario1, scenario2, scenario3, scenario4)");
}

struct BoundingBox {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  int right() const noexcept { return x + w; }   // exclusive
  int bottom() const noexcept { return y + h; }  // exclusive
  long area() const noexcept { return static_cast<long>(w) * h; }

  bool inside(int width, int height) const noexcept {
    return w > 0 && h > 0 && x >= 0 && y >= 0 && right() <= width && bottom() <= height;
  }

  BoundingBox expanded(int margin) const noexcept {
    return {x - margin, y - margin, w + 2 * margin, h + 2 * margin};
  }

  /// Intersection with the frame rectangle.
  BoundingBox clipped(int width, int height) const noexcept {
    const int x0 = std::clamp(x, 0, width);
    const int y0 = std::clamp(y, 0, height);
    const int x1 = std::clamp(right(), 0, width);
    const int y1 = std::clamp(bottom(), 0, height);
    return {x0, y0, std::max(0, x1 - x0), std::max(0, y1 - y0)};
  }

  /// A w x h box whose center is the nearest pixel-grid position to `c`,
  /// shifted (not shrunk) to lie inside the frame. Shrinks only when the
  /// frame itself is smaller than the box.
  static BoundingBox centered_on(Point2 c, int w, int h, int width, int height) noexcept {
    w = std::min(w, width);
    h = std::min(h, height);
    const int x = static_cast<int>(std::lround(c.x - (w - 1) / 2.0));
    const int y = static_cast<int>(std::lround(c.y - (h - 1) / 2.0));
    return {std::clamp(x, 0, width - w), std::clamp(y, 0, height - h), w, h};
  }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// True when the intersection rectangle exceeds `margin` in both width and height.
inline bool overlaps_beyond(const BoundingBox& a, const BoundingBox& b, int margin) noexcept {
  const int iw = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const int ih = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  return iw > margin && ih > margin;
}

struct Candidate {
  BoundingBox box;
  long black_count = 0;
  Point2 com;
};

inline bool is_black_pixel(Rgb rgb, int black_max) noexcept {
  return std::max({rgb.r, rgb.g, rgb.b}) <= black_max;
}

namespace detail {
inline void require_inside(const Frame& frame, const BoundingBox& box) {
  if (!box.inside(frame.width(), frame.height())) {
    throw BoundsError("box (" + std::to_string(box.x) + "," + std::to_string(box.y) + " " +
                      std::to_string(box.w) + "x" + std::to_string(box.h) +
                      ") is outside the " + std::to_string(frame.width()) + "x" +
                      std::to_string(frame.height()) + " frame");
  }
}
}  // namespace detail

inline long count_black_pixels(const Frame& frame, const BoundingBox& box, int black_max) {
  detail::require_inside(frame, box);
  long n = 0;
  for (int y = box.y; y < box.bottom(); ++y)
    for (int x = box.x; x < box.right(); ++x) n += is_black_pixel(frame.at(x, y), black_max);
  return n;
}

/// Unweighted mean coordinate of the black pixels in `box`.
inline Point2 center_of_mass(const Frame& frame, const BoundingBox& box, int black_max) {
  detail::require_inside(frame, box);
  long n = 0;
  long sx = 0;
  long sy = 0;
  for (int y = box.y; y < box.bottom(); ++y) {
    for (int x = box.x; x < box.right(); ++x) {
      if (is_black_pixel(frame.at(x, y), black_max)) {
        ++n;
        sx += x;
        sy += y;
      }
    }
  }
  if (n == 0) throw EmptyObjectError("no black pixels inside box");
  return {static_cast<double>(sx) / n, static_cast<double>(sy) / n};
}

/// Summed-area tables of the black mask and its first moments, so box counts
/// and centers of mass cost O(1) after one O(W*H) pass.
class BlackPixelIndex {
 public:
  BlackPixelIndex(const Frame& frame, int black_max)
      : width_(frame.width()), height_(frame.height()) {
    const std::size_t stride = static_cast<std::size_t>(width_) + 1;
    const std::size_t cells = stride * (static_cast<std::size_t>(height_) + 1);
    count_.assign(cells, 0);
    sum_x_.assign(cells, 0);
    sum_y_.assign(cells, 0);
    for (int y = 0; y < height_; ++y) {
      std::int64_t row_n = 0, row_x = 0, row_y = 0;
      for (int x = 0; x < width_; ++x) {
        if (is_black_pixel(frame.at(x, y), black_max)) {
          ++row_n;
          row_x += x;
          row_y += y;
        }
        const std::size_t here = (y + 1) * stride + (x + 1);
        const std::size_t above = y * stride + (x + 1);
        count_[here] = count_[above] + row_n;
        sum_x_[here] = sum_x_[above] + row_x;
        sum_y_[here] = sum_y_[above] + row_y;
      }
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  long count(const BoundingBox& box) const { return static_cast<long>(rect(count_, box)); }

  std::optional<Point2> center_of_mass(const BoundingBox& box) const {
    const auto n = rect(count_, box);
    if (n == 0) return std::nullopt;
    return Point2{static_cast<double>(rect(sum_x_, box)) / static_cast<double>(n),
                  static_cast<double>(rect(sum_y_, box)) / static_cast<double>(n)};
  }

 private:
  std::int64_t rect(const std::vector<std::int64_t>& t, const BoundingBox& b) const {
    if (!b.inside(width_, height_)) {
      throw BoundsError("box outside indexed frame");
    }
    const std::size_t stride = static_cast<std::size_t>(width_) + 1;
    const auto at = [&](int x, int y) { return t[static_cast<std::size_t>(y) * stride + x]; };
    return at(b.right(), b.bottom()) - at(b.x, b.bottom()) - at(b.right(), b.y) + at(b.x, b.y);
  }

  int width_;
  int height_;
  std::vector<std::int64_t> count_;
  std::vector<std::int64_t> sum_x_;
  std::vector<std::int64_t> sum_y_;
};

/// Searches `box` widened by `margin` (clipped to the frame), recenters a box
/// of the original size on the center of mass found there, and reports the
/// count and center of mass of the recentered box. Empty when either region
/// holds no black pixel.
inline std::optional<Candidate> relocate(const BlackPixelIndex& index, const BoundingBox& box,
                                         int margin) {
  const BoundingBox region = box.expanded(margin).clipped(index.width(), index.height());
  if (region.w == 0 || region.h == 0) return std::nullopt;
  const auto found = index.center_of_mass(region);
  if (!found) return std::nullopt;
  const BoundingBox recentered =
      BoundingBox::centered_on(*found, box.w, box.h, index.width(), index.height());
  const auto com = index.center_of_mass(recentered);
  if (!com) return std::nullopt;
  return Candidate{recentered, index.count(recentered), *com};
}

/// Vicinity refinement of a box that met the count threshold. Returns nothing
/// on refinement failure (the recentered box no longer qualifies); callers
/// then keep the unrefined box.
inline std::optional<Candidate> refine_candidate(const BlackPixelIndex& index,
                                                 const BoundingBox& box,
                                                 const DetectionParams& params) {
  auto c = relocate(index, box, params.vicinity_margin);
  if (!c || c->black_count < params.min_black_count) return std::nullopt;
  return c;
}

inline std::optional<Candidate> refine_candidate(const Frame& frame, const BoundingBox& box,
                                                 const DetectionParams& params) {
  return refine_candidate(BlackPixelIndex(frame, params.black_max), box, params);
}

namespace detail {
// Scan origins along one axis: every stride step that fits, plus the flush
// position against the far border.
inline std::vector<int> scan_positions(int extent, int box, int stride) {
  std::vector<int> out;
  const int last = std::max(0, extent - box);
  for (int p = 0; p <= last; p += stride) out.push_back(p);
  if (out.back() != last) out.push_back(last);
  return out;
}
}  // namespace detail

/// Raster-order sliding-box head search. Positions overlapping a claimed box
/// beyond the overlap margin are skipped; each emitted candidate's box joins
/// the claimed set for the rest of the scan.
inline std::vector<Candidate> scan_frame(const BlackPixelIndex& index, const DetectionParams& params,
                                         std::vector<BoundingBox> claimed = {}) {
  std::vector<Candidate> found;
  const int bw = std::min(params.box_w, index.width());
  const int bh = std::min(params.box_h, index.height());
  const auto is_claimed = [&](const BoundingBox& b) {
    return std::any_of(claimed.begin(), claimed.end(), [&](const BoundingBox& c) {
      return overlaps_beyond(b, c, params.overlap_margin);
    });
  };
  const auto xs = detail::scan_positions(index.width(), bw, params.scan_stride);
  for (int y : detail::scan_positions(index.height(), bh, params.scan_stride)) {
    for (int x : xs) {
      const BoundingBox box{x, y, bw, bh};
      if (is_claimed(box)) continue;
      const long n = index.count(box);
      if (n < params.min_black_count) continue;
      Candidate cand;
      if (auto refined = refine_candidate(index, box, params)) {
        if (is_claimed(refined->box)) continue;  // partial view of a claimed head
        cand = *refined;
      } else {
        cand = {box, n, *index.center_of_mass(box)};
      }
      claimed.push_back(cand.box);
      found.push_back(cand);
    }
  }
  return found;
}

inline std::vector<Candidate> scan_frame(const Frame& frame, const DetectionParams& params,
                                         std::vector<BoundingBox> claimed = {}) {
  params.validate();
  return scan_frame(BlackPixelIndex(frame, params.black_max), params, std::move(claimed));
}

}  // namespace pedtrack
