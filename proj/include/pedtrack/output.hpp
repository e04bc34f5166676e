#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pedtrack/calibration.hpp"
#include "pedtrack/error.hpp"
#include "pedtrack/frame_io.hpp"
#include "pedtrack/kinematics.hpp"
#include "pedtrack/tracking.hpp"

namespace pedtrack {

// ---------------------------------------------------------------------------
// Direction groups and colors

enum class TrackGroup { left_to_right, right_to_left, stationary };

inline TrackGroup group_of(const Track& t) {
  if (t.history.empty()) return TrackGroup::stationary;
  const double dx = t.history.back().com.x - t.history.front().com.x;
  if (dx > 0.0) return TrackGroup::left_to_right;
  if (dx < 0.0) return TrackGroup::right_to_left;
  return TrackGroup::stationary;
}

inline const char* to_string(TrackGroup g) noexcept {
  switch (g) {
    case TrackGroup::left_to_right: return "LR";
    case TrackGroup::right_to_left: return "RL";
    default: return "stationary";
  }
}

struct AnnotationStyle {
  Rgb box_outline{255, 255, 255};
  // Blue family for pedestrians coming from the left, red for the right.
  std::vector<Rgb> lr_palette{{30, 90, 220},  {60, 150, 255}, {0, 70, 170},
                              {100, 180, 235}, {40, 120, 190}, {90, 90, 210}};
  std::vector<Rgb> rl_palette{{220, 40, 40},  {255, 120, 80}, {170, 30, 50},
                              {240, 90, 150}, {205, 100, 30}, {185, 60, 100}};
  int line_thickness = 1;
  bool group_coloring = true;
};

/// Trajectory color per track id. With group coloring, tracks cycle through
/// their direction family in id order; otherwise (and for stationary tracks)
/// the track's own display color is used.
inline std::map<int, Rgb> assign_colors(const std::vector<Track>& tracks,
                                        const AnnotationStyle& style) {
  std::map<int, Rgb> colors;
  std::size_t lr = 0, rl = 0;
  std::vector<const Track*> ordered;
  for (const auto& t : tracks) ordered.push_back(&t);
  std::sort(ordered.begin(), ordered.end(),
            [](const Track* a, const Track* b) { return a->id < b->id; });
  for (const Track* t : ordered) {
    Rgb c = t->display_color;
    if (style.group_coloring) {
      const auto g = group_of(*t);
      if (g == TrackGroup::left_to_right && !style.lr_palette.empty()) {
        c = style.lr_palette[lr++ % style.lr_palette.size()];
      } else if (g == TrackGroup::right_to_left && !style.rl_palette.empty()) {
        c = style.rl_palette[rl++ % style.rl_palette.size()];
      }
    }
    colors[t->id] = c;
  }
  return colors;
}

// ---------------------------------------------------------------------------
// Annotation

namespace detail {

inline void plot(Frame& f, int x, int y, Rgb c, int thickness) {
  const int lo = -(thickness - 1) / 2;
  const int hi = thickness / 2;
  for (int dy = lo; dy <= hi; ++dy)
    for (int dx = lo; dx <= hi; ++dx)
      if (f.contains(x + dx, y + dy)) f.set(x + dx, y + dy, c);
}

}  // namespace detail

/// Bresenham segment between integer endpoints.
inline void draw_line(Frame& f, int x0, int y0, int x1, int y1, Rgb c, int thickness = 1) {
  const int dx = std::abs(x1 - x0);
  const int dy = -std::abs(y1 - y0);
  const int sx = x0 < x1 ? 1 : -1;
  const int sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  for (;;) {
    detail::plot(f, x0, y0, c, thickness);
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

inline void draw_box_outline(Frame& f, const BoundingBox& b, Rgb c, int thickness = 1) {
  const int x1 = b.right() - 1;
  const int y1 = b.bottom() - 1;
  draw_line(f, b.x, b.y, x1, b.y, c, thickness);
  draw_line(f, x1, b.y, x1, y1, c, thickness);
  draw_line(f, x1, y1, b.x, y1, c, thickness);
  draw_line(f, b.x, y1, b.x, b.y, c, thickness);
}

struct TrajectoryPolyline {
  int track_id = 0;
  std::vector<std::pair<int, int>> vertices;  // rounded centers of mass
  std::size_t segments() const { return vertices.empty() ? 0 : vertices.size() - 1; }
};

/// Tracks with a history entry at `frame_index`, each with its polyline
/// through every center of mass up to that frame.
inline std::vector<TrajectoryPolyline> visible_trajectories(const std::vector<Track>& tracks,
                                                            std::size_t frame_index) {
  std::vector<TrajectoryPolyline> out;
  for (const auto& t : tracks) {
    if (!t.at_frame(frame_index)) continue;
    TrajectoryPolyline p{t.id, {}};
    for (const auto& pt : t.history) {
      if (pt.frame > frame_index) break;
      p.vertices.emplace_back(static_cast<int>(std::lround(pt.com.x)),
                              static_cast<int>(std::lround(pt.com.y)));
    }
    out.push_back(std::move(p));
  }
  return out;
}

inline Frame annotate_frame(const Frame& frame, const std::vector<Track>& tracks,
                            const AnnotationStyle& style = {}) {
  Frame out = frame;
  const auto colors = assign_colors(tracks, style);
  const auto lines = visible_trajectories(tracks, frame.index());
  for (const auto& line : lines) {
    const Rgb c = colors.at(line.track_id);
    for (std::size_t i = 1; i < line.vertices.size(); ++i) {
      const auto [x0, y0] = line.vertices[i - 1];
      const auto [x1, y1] = line.vertices[i];
      draw_line(out, x0, y0, x1, y1, c, style.line_thickness);
    }
  }
  for (const auto& t : tracks) {
    if (const TrackPoint* p = t.at_frame(frame.index())) {
      draw_box_outline(out, p->box, style.box_outline, style.line_thickness);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr std::string_view kCsvHeader =
    "track_id,frame,t_s,x_px,y_px,x_m,y_m,step_m,cum_m,v_mps,a_mps2,flag";

namespace detail {
inline std::string g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v == 0.0 ? 0.0 : v);  // no "-0"
  return buf;
}
}  // namespace detail

/// One row per (track, frame); velocity and acceleration cells stay empty
/// where undefined. Values carry 6 significant digits.
inline std::string export_csv(const std::vector<KinematicsSeries>& series,
                              const std::vector<Track>& tracks, const SceneCalibration& cal) {
  const auto [sx, sy] = meters_per_pixel(cal);
  std::map<int, const KinematicsSeries*> by_id;
  for (const auto& s : series) by_id[s.track_id] = &s;
  std::vector<const Track*> ordered;
  for (const auto& t : tracks) ordered.push_back(&t);
  std::sort(ordered.begin(), ordered.end(),
            [](const Track* a, const Track* b) { return a->id < b->id; });

  std::string out(kCsvHeader);
  out += '\n';
  for (const Track* t : ordered) {
    const auto it = by_id.find(t->id);
    if (it == by_id.end()) continue;
    const auto& samples = it->second->samples;
    for (std::size_t i = 0; i < t->history.size() && i < samples.size(); ++i) {
      const auto& p = t->history[i];
      const auto& s = samples[i];
      out += std::to_string(t->id) + ',' + std::to_string(p.frame) + ',' + detail::g6(s.t) + ',' +
             detail::g6(p.com.x) + ',' + detail::g6(p.com.y) + ',' + detail::g6(p.com.x * sx) +
             ',' + detail::g6(p.com.y * sy) + ',' + detail::g6(s.step_distance_m) + ',' +
             detail::g6(s.cumulative_distance_m) + ',' +
             (s.velocity_mps ? detail::g6(*s.velocity_mps) : "") + ',' +
             (s.acceleration_mps2 ? detail::g6(*s.acceleration_mps2) : "") + ',' +
             to_string(p.flag) + '\n';
    }
  }
  return out;
}

inline void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct CsvRow {
  int track_id = 0;
  std::size_t frame = 0;
  double t_s = 0, x_px = 0, y_px = 0, x_m = 0, y_m = 0, step_m = 0, cum_m = 0;
  std::optional<double> v_mps;
  std::optional<double> a_mps2;
  PointFlag flag = PointFlag::measured;
};

namespace detail {
inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

inline double parse_cell(const std::string& cell, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used == cell.size()) return v;
  } catch (const std::exception&) {
  }
  throw LoadError("csv line " + std::to_string(line) + ": bad number '" + cell + "'");
}
}  // namespace detail

inline std::vector<CsvRow> parse_tracks_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw LoadError("tracks csv: unexpected header");
  }
  std::vector<CsvRow> rows;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    const auto c = detail::split_csv_line(line);
    if (c.size() != 12) throw LoadError("csv line " + std::to_string(number) + ": expected 12 cells");
    CsvRow r;
    r.track_id = static_cast<int>(detail::parse_cell(c[0], number));
    r.frame = static_cast<std::size_t>(detail::parse_cell(c[1], number));
    r.t_s = detail::parse_cell(c[2], number);
    r.x_px = detail::parse_cell(c[3], number);
    r.y_px = detail::parse_cell(c[4], number);
    r.x_m = detail::parse_cell(c[5], number);
    r.y_m = detail::parse_cell(c[6], number);
    r.step_m = detail::parse_cell(c[7], number);
    r.cum_m = detail::parse_cell(c[8], number);
    if (!c[9].empty()) r.v_mps = detail::parse_cell(c[9], number);
    if (!c[10].empty()) r.a_mps2 = detail::parse_cell(c[10], number);
    if (c[11] == "measured") {
      r.flag = PointFlag::measured;
    } else if (c[11] == "held") {
      r.flag = PointFlag::held;
    } else {
      throw LoadError("csv line " + std::to_string(number) + ": bad flag '" + c[11] + "'");
    }
    rows.push_back(r);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Charts

enum class ChartQuantity { distance, velocity, acceleration };

inline const char* to_string(ChartQuantity q) noexcept {
  switch (q) {
    case ChartQuantity::distance: return "distance";
    case ChartQuantity::velocity: return "velocity";
    default: return "acceleration";
  }
}

inline const char* unit_of(ChartQuantity q) noexcept {
  switch (q) {
    case ChartQuantity::distance: return "m";
    case ChartQuantity::velocity: return "m/s";
    default: return "m/s²";
  }
}

struct ChartOptions {
  std::map<int, Rgb> colors;
  std::map<int, TrackGroup> groups;
  // Added to right-to-left distance curves so the two groups separate.
  double rl_distance_offset_m = 0.0;
  int smoothing_window = 1;
  int width_px = 800;
  int height_px = 500;
};

/// Options for the given tracks: group colors, and the right-to-left distance
/// offset defaulting to the scene width.
inline ChartOptions chart_options_for(const std::vector<Track>& tracks, const SceneCalibration& cal,
                                      const AnnotationStyle& style = {}) {
  ChartOptions o;
  o.colors = assign_colors(tracks, style);
  for (const auto& t : tracks) o.groups[t.id] = group_of(t);
  o.rl_distance_offset_m = cal.scene_width_m();
  return o;
}

struct ChartSeries {
  int track_id = 0;
  Rgb color;
  std::vector<Point2> points;  // (t seconds, value) in data units
};

struct AxisMap {
  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  double left = 70, top = 40, plot_w = 580, plot_h = 400;

  Point2 to_svg(Point2 p) const {
    return {left + (p.x - x_min) / (x_max - x_min) * plot_w,
            top + plot_h - (p.y - y_min) / (y_max - y_min) * plot_h};
  }
};

struct Chart {
  ChartQuantity quantity = ChartQuantity::distance;
  std::vector<ChartSeries> series;
  AxisMap axes;
  double rl_offset_m = 0.0;
  int width_px = 800;
  int height_px = 500;
};

inline Chart build_chart(const std::vector<KinematicsSeries>& series, ChartQuantity quantity,
                         const ChartOptions& options = {}) {
  Chart chart;
  chart.quantity = quantity;
  chart.width_px = options.width_px;
  chart.height_px = options.height_px;
  if (quantity == ChartQuantity::distance) chart.rl_offset_m = options.rl_distance_offset_m;

  for (const auto& s : series) {
    ChartSeries cs;
    cs.track_id = s.track_id;
    const auto color = options.colors.find(s.track_id);
    cs.color = color != options.colors.end() ? color->second : track_color(s.track_id);
    const auto group = options.groups.find(s.track_id);
    const bool rl = group != options.groups.end() && group->second == TrackGroup::right_to_left;
    std::vector<double> ts, vs;
    for (const auto& smp : s.samples) {
      std::optional<double> v;
      switch (quantity) {
        case ChartQuantity::distance:
          v = smp.cumulative_distance_m + (rl ? chart.rl_offset_m : 0.0);
          break;
        case ChartQuantity::velocity: v = smp.velocity_mps; break;
        case ChartQuantity::acceleration: v = smp.acceleration_mps2; break;
      }
      if (!v) continue;
      ts.push_back(smp.t);
      vs.push_back(*v);
    }
    if (quantity != ChartQuantity::distance) vs = moving_average(vs, options.smoothing_window);
    for (std::size_t i = 0; i < ts.size(); ++i) cs.points.push_back({ts[i], vs[i]});
    if (!cs.points.empty()) chart.series.push_back(std::move(cs));
  }
  if (chart.series.empty()) {
    throw ChartError(std::string("no data points for the ") + to_string(quantity) + " chart");
  }

  auto& ax = chart.axes;
  ax.x_min = ax.y_min = INFINITY;
  ax.x_max = ax.y_max = -INFINITY;
  for (const auto& cs : chart.series) {
    for (const auto& p : cs.points) {
      ax.x_min = std::min(ax.x_min, p.x);
      ax.x_max = std::max(ax.x_max, p.x);
      ax.y_min = std::min(ax.y_min, p.y);
      ax.y_max = std::max(ax.y_max, p.y);
    }
  }
  if (quantity != ChartQuantity::acceleration) ax.y_min = std::min(ax.y_min, 0.0);
  const auto widen = [](double& lo, double& hi) {
    if (hi > lo) return;
    const double pad = std::abs(lo) > 0.0 ? std::abs(lo) * 0.1 : 1.0;
    lo -= pad;
    hi += pad;
  };
  widen(ax.x_min, ax.x_max);
  widen(ax.y_min, ax.y_max);
  ax.left = 70;
  ax.top = 40;
  ax.plot_w = chart.width_px - 70 - 150;
  ax.plot_h = chart.height_px - 40 - 60;
  return chart;
}

namespace detail {
inline std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}
inline std::string svg_rgb(Rgb c) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}
}  // namespace detail

inline std::string render_svg(const Chart& chart) {
  using detail::fixed3;
  const auto& ax = chart.axes;
  std::ostringstream o;
  const std::string title = to_string(chart.quantity);
  const std::string unit = unit_of(chart.quantity);
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << chart.width_px << "\" height=\""
    << chart.height_px << "\" viewBox=\"0 0 " << chart.width_px << " " << chart.height_px
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  o << "<text x=\"" << chart.width_px / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
    << title << " vs. time</text>\n";
  o << "<rect x=\"" << fixed3(ax.left) << "\" y=\"" << fixed3(ax.top) << "\" width=\""
    << fixed3(ax.plot_w) << "\" height=\"" << fixed3(ax.plot_h)
    << "\" fill=\"none\" stroke=\"#000000\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double tx = ax.x_min + (ax.x_max - ax.x_min) * i / 5.0;
    const double ty = ax.y_min + (ax.y_max - ax.y_min) * i / 5.0;
    const Point2 px = ax.to_svg({tx, ax.y_min});
    const Point2 py = ax.to_svg({ax.x_min, ty});
    o << "<text x=\"" << fixed3(px.x) << "\" y=\"" << fixed3(ax.top + ax.plot_h + 16)
      << "\" text-anchor=\"middle\">" << detail::g6(tx) << "</text>\n";
    o << "<text x=\"" << fixed3(ax.left - 6) << "\" y=\"" << fixed3(py.y + 4)
      << "\" text-anchor=\"end\">" << detail::g6(ty) << "</text>\n";
  }
  o << "<text x=\"" << fixed3(ax.left + ax.plot_w / 2) << "\" y=\"" << chart.height_px - 18
    << "\" text-anchor=\"middle\">time (s)</text>\n";
  o << "<text x=\"16\" y=\"" << fixed3(ax.top + ax.plot_h / 2) << "\" text-anchor=\"middle\" "
    << "transform=\"rotate(-90 16 " << fixed3(ax.top + ax.plot_h / 2) << ")\">" << title << " ("
    << unit << ")</text>\n";
  if (ax.y_min < 0.0 && ax.y_max > 0.0) {
    const Point2 a = ax.to_svg({ax.x_min, 0.0});
    const Point2 b = ax.to_svg({ax.x_max, 0.0});
    o << "<line x1=\"" << fixed3(a.x) << "\" y1=\"" << fixed3(a.y) << "\" x2=\"" << fixed3(b.x)
      << "\" y2=\"" << fixed3(b.y) << "\" stroke=\"#999999\" stroke-dasharray=\"4 3\"/>\n";
  }
  for (const auto& s : chart.series) {
    o << "<polyline data-track=\"" << s.track_id << "\" fill=\"none\" stroke=\""
      << detail::svg_rgb(s.color) << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      const Point2 p = ax.to_svg(s.points[i]);
      o << (i ? " " : "") << fixed3(p.x) << "," << fixed3(p.y);
    }
    o << "\"/>\n";
  }
  double ly = ax.top + 10;
  const double lx = ax.left + ax.plot_w + 14;
  for (const auto& s : chart.series) {
    o << "<line x1=\"" << fixed3(lx) << "\" y1=\"" << fixed3(ly) << "\" x2=\"" << fixed3(lx + 20)
      << "\" y2=\"" << fixed3(ly) << "\" stroke=\"" << detail::svg_rgb(s.color)
      << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << fixed3(lx + 26) << "\" y=\"" << fixed3(ly + 4) << "\">track " << s.track_id
      << "</text>\n";
    ly += 18;
  }
  if (chart.rl_offset_m != 0.0) {
    o << "<text x=\"" << fixed3(lx) << "\" y=\"" << fixed3(ly + 10) << "\" font-size=\"10\">"
      << "RL offset +" << detail::g6(chart.rl_offset_m) << " m</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

/// Plain-text sidecar: "track_id t value" per plotted point.
inline std::string chart_data(const Chart& chart) {
  std::string out = std::string("# ") + to_string(chart.quantity) + " (" + unit_of(chart.quantity) +
                    ") vs time (s)";
  if (chart.rl_offset_m != 0.0) out += "; RL offset " + detail::g6(chart.rl_offset_m) + " m";
  out += "\n# track_id t value\n";
  char buf[96];
  for (const auto& s : chart.series) {
    for (const auto& p : s.points) {
      std::snprintf(buf, sizeof buf, "%d %.9g %.9g\n", s.track_id, p.x, p.y);
      out += buf;
    }
  }
  return out;
}

struct ChartDocument {
  Chart chart;
  std::string svg;
  std::string data;
};

inline ChartDocument render_chart(const std::vector<KinematicsSeries>& series,
                                  ChartQuantity quantity, const ChartOptions& options = {}) {
  ChartDocument doc;
  doc.chart = build_chart(series, quantity, options);
  doc.svg = render_svg(doc.chart);
  doc.data = chart_data(doc.chart);
  return doc;
}

}  // namespace pedtrack
