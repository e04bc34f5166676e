#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pedtrack/detection.hpp"
#include "pedtrack/error.hpp"
#include "pedtrack/frame_io.hpp"

namespace pedtrack {

struct Waypoint {
  std::size_t frame = 0;
  Point2 pos;
};

/// Named frame interval attached to an actor (e.g. a scripted slowdown).
struct ActorMark {
  std::string label;
  std::size_t start = 0;
  std::size_t end = 0;  // inclusive
};

struct ActorPath {
  int actor_id = 0;
  std::vector<Waypoint> waypoints;
  double head_radius_px = 14.0;
  Rgb head_shade{10, 10, 10};
  std::vector<ActorMark> marks;

  std::size_t enter_frame() const { return waypoints.front().frame; }
  std::size_t exit_frame() const { return waypoints.back().frame; }

  /// Piecewise-linear position; empty outside [enter, exit].
  std::optional<Point2> position(std::size_t frame) const {
    if (waypoints.empty() || frame < enter_frame() || frame > exit_frame()) return std::nullopt;
    const auto it = std::lower_bound(waypoints.begin(), waypoints.end(), frame,
                                     [](const Waypoint& w, std::size_t f) { return w.frame < f; });
    if (it->frame == frame) return it->pos;
    const auto& b = *it;
    const auto& a = *(it - 1);
    // Multiply before dividing so integer per-frame steps come out exact.
    const double n = static_cast<double>(frame - a.frame);
    const double span = static_cast<double>(b.frame - a.frame);
    return Point2{a.pos.x + (b.pos.x - a.pos.x) * n / span, a.pos.y + (b.pos.y - a.pos.y) * n / span};
  }

  const ActorMark* mark(std::string_view label) const {
    for (const auto& m : marks)
      if (m.label == label) return &m;
    return nullptr;
  }
};

struct ScenarioScript {
  std::string name = "custom";
  std::vector<ActorPath> actors;
  Rgb background{230, 230, 230};
  int width = 640;
  int height = 480;
  std::size_t n_frames = 300;
  double fps = 30.0;
  std::uint64_t seed = 0;
  double jitter_px = 0.0;  // uniform per-frame sway amplitude, 0 = off

  void validate() const {
    if (width <= 0 || height <= 0) throw ScriptError(0, "size must be positive");
    if (n_frames == 0) throw ScriptError(0, "frames must be positive");
    if (!(fps > 0.0)) throw ScriptError(0, "fps must be positive");
    if (!(jitter_px >= 0.0) || !std::isfinite(jitter_px)) throw ScriptError(0, "bad jitter");
    std::set<int> ids;
    for (const auto& a : actors) {
      const std::string who = "actor " + std::to_string(a.actor_id);
      if (!ids.insert(a.actor_id).second) throw ScriptError(0, "duplicate " + who);
      if (!(a.head_radius_px > 0.0) || !std::isfinite(a.head_radius_px)) {
        throw ScriptError(0, who + ": radius must be positive");
      }
      if (a.waypoints.empty()) throw ScriptError(0, who + " has no waypoints");
      for (std::size_t i = 0; i < a.waypoints.size(); ++i) {
        const auto& w = a.waypoints[i];
        if (!std::isfinite(w.pos.x) || !std::isfinite(w.pos.y)) {
          throw ScriptError(0, who + ": non-finite position at frame " + std::to_string(w.frame));
        }
        if (i > 0 && w.frame <= a.waypoints[i - 1].frame) {
          throw ScriptError(0, who + ": waypoint frames must strictly increase");
        }
      }
    }
  }

  /// Every head shade must count as black under `params`.
  void validate_against(const DetectionParams& params) const {
    for (const auto& a : actors) {
      if (!is_black_pixel(a.head_shade, params.black_max)) {
        throw ScriptError(0, "actor " + std::to_string(a.actor_id) +
                                 " shade is not black under black_max " +
                                 std::to_string(params.black_max));
      }
    }
  }
};

namespace detail {

// Counter-based so that any single frame renders without replaying earlier ones.
inline Point2 jitter_offset(std::uint64_t seed, int actor_id, std::size_t frame, double amplitude) {
  if (amplitude == 0.0) return {};
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(actor_id), static_cast<std::uint32_t>(frame)};
  std::mt19937_64 gen(seq);
  const auto unit = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  const double ux = unit();
  const double uy = unit();
  return {(2.0 * ux - 1.0) * amplitude, (2.0 * uy - 1.0) * amplitude};
}

}  // namespace detail

/// Drawn center of `actor` at `frame`, including any seeded jitter.
inline std::optional<Point2> actor_center(const ScenarioScript& script, const ActorPath& actor,
                                          std::size_t frame) {
  auto p = actor.position(frame);
  if (!p) return std::nullopt;
  const Point2 j = detail::jitter_offset(script.seed, actor.actor_id, frame, script.jitter_px);
  return Point2{p->x + j.x, p->y + j.y};
}

/// Flat disk rasterization: pixel (x, y) is covered iff its center lies
/// within `radius` of `center`.
inline void draw_disk(Frame& frame, Point2 center, double radius, Rgb shade) {
  const int x0 = std::max(0, static_cast<int>(std::floor(center.x - radius)));
  const int x1 = std::min(frame.width() - 1, static_cast<int>(std::ceil(center.x + radius)));
  const int y0 = std::max(0, static_cast<int>(std::floor(center.y - radius)));
  const int y1 = std::min(frame.height() - 1, static_cast<int>(std::ceil(center.y + radius)));
  const double r2 = radius * radius;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const double dx = x - center.x;
      const double dy = y - center.y;
      if (dx * dx + dy * dy <= r2) frame.set(x, y, shade);
    }
  }
}

inline Frame render_frame(const ScenarioScript& script, std::size_t frame_index) {
  Frame f(script.width, script.height, script.background, frame_index, script.fps);
  std::vector<const ActorPath*> order;
  for (const auto& a : script.actors) order.push_back(&a);
  std::sort(order.begin(), order.end(),
            [](const ActorPath* a, const ActorPath* b) { return a->actor_id < b->actor_id; });
  for (const ActorPath* a : order) {
    if (auto c = actor_center(script, *a, frame_index)) {
      draw_disk(f, *c, a->head_radius_px, a->head_shade);
    }
  }
  return f;
}

inline FrameSequence render_scenario(const ScenarioScript& script) {
  script.validate();
  FrameSequence seq;
  seq.fps = script.fps;
  seq.source_dir = "synth:" + script.name;
  seq.frames.reserve(script.n_frames);
  for (std::size_t k = 0; k < script.n_frames; ++k) seq.frames.push_back(render_frame(script, k));
  return seq;
}

struct TruthPoint {
  std::size_t frame = 0;
  Point2 pos;
};

struct ActorTruth {
  int actor_id = 0;
  std::vector<TruthPoint> points;
};

/// Exact drawn centers for every frame each actor is in view.
inline std::vector<ActorTruth> ground_truth(const ScenarioScript& script) {
  script.validate();
  std::vector<ActorTruth> out;
  for (const auto& a : script.actors) {
    ActorTruth t{a.actor_id, {}};
    const std::size_t last = std::min(a.exit_frame(), script.n_frames - 1);
    for (std::size_t k = a.enter_frame(); k <= last; ++k) {
      t.points.push_back({k, *actor_center(script, a, k)});
    }
    out.push_back(std::move(t));
  }
  std::sort(out.begin(), out.end(),
            [](const ActorTruth& a, const ActorTruth& b) { return a.actor_id < b.actor_id; });
  return out;
}

// ---------------------------------------------------------------------------
// Script text format

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string format_rgb(Rgb c) {
  return std::to_string(c.r) + "," + std::to_string(c.g) + "," + std::to_string(c.b);
}

class ScriptLine {
 public:
  ScriptLine(std::size_t number, std::vector<std::string> tokens)
      : number_(number), tokens_(std::move(tokens)) {}

  std::size_t number() const noexcept { return number_; }
  std::size_t size() const noexcept { return tokens_.size(); }
  const std::string& operator[](std::size_t i) const { return tokens_.at(i); }

  void expect(std::size_t n) const {
    if (tokens_.size() != n) {
      fail("'" + tokens_[0] + "' expects " + std::to_string(n - 1) + " argument(s)");
    }
  }

  [[noreturn]] void fail(const std::string& what) const { throw ScriptError(number_, what); }

  double real(std::size_t i) const {
    const auto& s = tokens_.at(i);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
      fail("expected a finite number, got '" + s + "'");
    }
    return v;
  }

  long long integer(std::size_t i, long long lo, long long hi) const {
    const auto& s = tokens_.at(i);
    long long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || v < lo || v > hi) {
      fail("expected an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) +
           "], got '" + s + "'");
    }
    return v;
  }

  Rgb rgb(std::size_t i) const {
    const auto& s = tokens_.at(i);
    std::array<int, 3> c{};
    std::size_t pos = 0;
    for (int k = 0; k < 3; ++k) {
      const std::size_t comma = k < 2 ? s.find(',', pos) : s.size();
      if (comma == std::string::npos) fail("expected r,g,b, got '" + s + "'");
      const auto part = s.substr(pos, comma - pos);
      const auto res = std::from_chars(part.data(), part.data() + part.size(), c[k]);
      if (part.empty() || res.ec != std::errc{} || res.ptr != part.data() + part.size() ||
          c[k] < 0 || c[k] > 255) {
        fail("expected r,g,b with channels in 0..255, got '" + s + "'");
      }
      pos = comma + 1;
    }
    return {static_cast<std::uint8_t>(c[0]), static_cast<std::uint8_t>(c[1]),
            static_cast<std::uint8_t>(c[2])};
  }

 private:
  std::size_t number_;
  std::vector<std::string> tokens_;
};

}  // namespace detail

/// Parses the line-oriented scenario format:
///
///   # comment
///   name <word>            frames <n>          size <w> <h>
///   bg <r,g,b>             seed <s>            fps <f>        jitter <px>
///   actor <id> radius <r> shade <r,g,b>
///   wp <frame> <x> <y>             (waypoint of the most recent actor)
///   mark <label> <start> <end>     (frame interval of the most recent actor)
inline ScenarioScript parse_script(std::string_view text) {
  ScenarioScript script;
  script.actors.clear();
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t number = 0;
  ActorPath* current = nullptr;
  while (std::getline(in, raw)) {
    ++number;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream words(raw);
    std::vector<std::string> tokens;
    for (std::string w; words >> w;) tokens.push_back(w);
    if (tokens.empty()) continue;
    const detail::ScriptLine line(number, std::move(tokens));
    const auto& key = line[0];
    if (key == "name") {
      line.expect(2);
      script.name = line[1];
    } else if (key == "frames") {
      line.expect(2);
      script.n_frames = static_cast<std::size_t>(line.integer(1, 1, 10'000'000));
    } else if (key == "size") {
      line.expect(3);
      script.width = static_cast<int>(line.integer(1, 1, 100'000));
      script.height = static_cast<int>(line.integer(2, 1, 100'000));
    } else if (key == "bg") {
      line.expect(2);
      script.background = line.rgb(1);
    } else if (key == "seed") {
      line.expect(2);
      script.seed = static_cast<std::uint64_t>(line.integer(1, 0, INT64_MAX));
    } else if (key == "fps") {
      line.expect(2);
      script.fps = line.real(1);
      if (!(script.fps > 0.0)) line.fail("fps must be positive");
    } else if (key == "jitter") {
      line.expect(2);
      script.jitter_px = line.real(1);
      if (script.jitter_px < 0.0) line.fail("jitter must be nonnegative");
    } else if (key == "actor") {
      line.expect(6);
      if (line[2] != "radius" || line[4] != "shade") {
        line.fail("expected 'actor <id> radius <r> shade <r,g,b>'");
      }
      ActorPath a;
      a.actor_id = static_cast<int>(line.integer(1, 0, INT32_MAX));
      for (const auto& other : script.actors) {
        if (other.actor_id == a.actor_id) line.fail("duplicate actor id " + line[1]);
      }
      a.head_radius_px = line.real(3);
      if (!(a.head_radius_px > 0.0)) line.fail("radius must be positive");
      a.head_shade = line.rgb(5);
      script.actors.push_back(std::move(a));
      current = &script.actors.back();
    } else if (key == "wp") {
      line.expect(4);
      if (!current) line.fail("waypoint before any actor");
      const auto frame = static_cast<std::size_t>(line.integer(1, 0, 10'000'000));
      if (!current->waypoints.empty() && frame <= current->waypoints.back().frame) {
        line.fail("waypoint frames must strictly increase");
      }
      current->waypoints.push_back({frame, {line.real(2), line.real(3)}});
    } else if (key == "mark") {
      line.expect(4);
      if (!current) line.fail("mark before any actor");
      const auto start = static_cast<std::size_t>(line.integer(2, 0, 10'000'000));
      const auto end = static_cast<std::size_t>(line.integer(3, 0, 10'000'000));
      if (end < start) line.fail("mark end precedes start");
      current->marks.push_back({line[1], start, end});
    } else {
      line.fail("unknown record '" + key + "'");
    }
  }
  for (const auto& a : script.actors) {
    if (a.waypoints.empty()) {
      throw ScriptError(number, "actor " + std::to_string(a.actor_id) + " has no waypoints");
    }
  }
  script.validate();
  return script;
}

inline std::string format_script(const ScenarioScript& s) {
  std::ostringstream out;
  out << "name " << s.name << "\n"
      << "frames " << s.n_frames << "\n"
      << "size " << s.width << " " << s.height << "\n"
      << "bg " << detail::format_rgb(s.background) << "\n"
      << "seed " << s.seed << "\n"
      << "fps " << detail::format_double(s.fps) << "\n";
  if (s.jitter_px != 0.0) out << "jitter " << detail::format_double(s.jitter_px) << "\n";
  for (const auto& a : s.actors) {
    out << "actor " << a.actor_id << " radius " << detail::format_double(a.head_radius_px)
        << " shade " << detail::format_rgb(a.head_shade) << "\n";
    for (const auto& m : a.marks) out << "mark " << m.label << " " << m.start << " " << m.end << "\n";
    for (const auto& w : a.waypoints) {
      out << "wp " << w.frame << " " << detail::format_double(w.pos.x) << " "
          << detail::format_double(w.pos.y) << "\n";
    }
  }
  return out.str();
}

inline ScenarioScript load_script(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open script " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_script(buf.str());
}

// ---------------------------------------------------------------------------
// Built-in scenarios

namespace detail {

inline double polyline_length(const std::vector<Point2>& pts) {
  double len = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) len += distance(pts[i - 1], pts[i]);
  return len;
}

inline Point2 polyline_at(const std::vector<Point2>& pts, double s) {
  s = std::max(0.0, s);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double seg = distance(pts[i - 1], pts[i]);
    if (s <= seg) {
      const double u = seg > 0.0 ? s / seg : 0.0;
      return {pts[i - 1].x + (pts[i].x - pts[i - 1].x) * u,
              pts[i - 1].y + (pts[i].y - pts[i - 1].y) * u};
    }
    s -= seg;
  }
  return pts.back();
}

/// One waypoint per frame along `path`, advancing by speed(frame_offset, s)
/// px per frame, until `done(frame_offset, s)` or the path end. `arc`, when
/// given, receives the arc length of each waypoint.
inline std::vector<Waypoint> walk(const std::vector<Point2>& path, std::size_t start_frame,
                                  const std::function<double(std::size_t, double)>& speed,
                                  const std::function<bool(std::size_t, double)>& done,
                                  std::vector<double>* arc = nullptr) {
  const double total = polyline_length(path);
  std::vector<Waypoint> wps;
  double s = 0.0;
  for (std::size_t k = 0;; ++k) {
    wps.push_back({start_frame + k, polyline_at(path, s)});
    if (arc) arc->push_back(s);
    if (done(k, s) || s >= total) break;
    s = std::min(total, s + speed(k, s));
  }
  return wps;
}

inline ActorPath make_actor(int id, double radius, std::vector<Waypoint> wps) {
  ActorPath a;
  a.actor_id = id;
  a.head_radius_px = radius;
  a.waypoints = std::move(wps);
  return a;
}

// Straight constant-speed crossing with explicit end waypoints only.
inline ActorPath straight_actor(int id, double radius, std::size_t enter, Point2 from, double vx,
                                std::size_t frames) {
  return make_actor(id, radius,
                    {{enter, from}, {enter + frames - 1, {from.x + vx * (frames - 1), from.y}}});
}

// Speed that ramps from `cruise` down to `slow` over `ramp` frames starting
// at `from`, holds, and ramps back up so that it is `cruise` again at `to`.
inline double slowdown_speed(std::size_t frame, std::size_t from, std::size_t to, double cruise,
                             double slow, double ramp) {
  if (frame < from || frame >= to) return cruise;
  const double into = static_cast<double>(frame - from) + 1.0;
  const double left = static_cast<double>(to - frame);
  const double u = std::min({1.0, into / ramp, left / ramp});
  return cruise + (slow - cruise) * u;
}

// First and last frame whose arc length falls inside [lo, hi].
inline ActorMark arc_window(std::string label, const std::vector<Waypoint>& wps,
                            const std::vector<double>& arc, double lo, double hi) {
  ActorMark m{std::move(label), 0, 0};
  bool any = false;
  for (std::size_t i = 0; i < wps.size(); ++i) {
    if (arc[i] < lo || arc[i] > hi) continue;
    if (!any) m.start = wps[i].frame;
    m.end = wps[i].frame;
    any = true;
  }
  return m;
}

}  // namespace detail

inline constexpr double kCruisePxPerFrame = 3.0;

inline ScenarioScript scenario_s1() {
  ScenarioScript s;
  s.name = "s1_one_way";
  const std::size_t span = 180;
  s.actors = {detail::straight_actor(0, 14.0, 0, {40, 120}, kCruisePxPerFrame, span),
              detail::straight_actor(1, 14.0, 30, {40, 240}, kCruisePxPerFrame, span),
              detail::straight_actor(2, 14.0, 60, {40, 360}, kCruisePxPerFrame, span)};
  return s;
}

inline ScenarioScript scenario_s2() {
  ScenarioScript s;
  s.name = "s2_bidirectional";
  const std::size_t span = 180;
  s.actors = {detail::straight_actor(0, 14.0, 0, {40, 100}, kCruisePxPerFrame, span),
              detail::straight_actor(1, 14.0, 20, {40, 180}, kCruisePxPerFrame, span),
              detail::straight_actor(2, 14.0, 10, {600, 300}, -kCruisePxPerFrame, span),
              detail::straight_actor(3, 14.0, 30, {600, 380}, -kCruisePxPerFrame, span)};
  return s;
}

/// Actor 1 walks out, brakes to a stop, turns and walks back; actor 0 in the
/// neighboring lane slows down while actor 1 is turning.
inline ScenarioScript scenario_s3() {
  ScenarioScript s;
  s.name = "s3_uturn";
  const double r = 15.0;
  const double v = kCruisePxPerFrame;

  // Signed per-frame speed profile of the turning actor.
  std::vector<double> profile;
  for (int k = 0; k < 80; ++k) profile.push_back(v);
  for (int j = 14; j >= 0; --j) profile.push_back(v * j / 15.0);
  for (int k = 0; k < 10; ++k) profile.push_back(0.0);
  for (int j = 1; j <= 15; ++j) profile.push_back(-v * j / 15.0);
  const std::size_t turner_start = 10;
  const Point2 turner_from{40, 240};
  std::vector<Waypoint> wps;
  double x = turner_from.x;
  for (std::size_t k = 0;; ++k) {
    wps.push_back({turner_start + k, {x, turner_from.y}});
    const double step = k < profile.size() ? profile[k] : -v;
    if (k >= profile.size() && x + step < 60.0) break;
    x += step;
  }
  ActorPath turner = detail::make_actor(1, r, std::move(wps));
  const std::size_t brake = turner_start + 80;
  turner.marks.push_back({"uturn", brake, brake + 40});
  turner.marks.push_back({"apex", brake + 15, brake + 25});

  const std::size_t slow_from = brake + 5;
  const std::size_t slow_to = brake + 45;
  const std::size_t neighbor_start = 20;
  ActorPath neighbor = detail::make_actor(
      0, r,
      detail::walk({{40, 120}, {580, 120}}, neighbor_start,
                   [&](std::size_t k, double) {
                     return detail::slowdown_speed(neighbor_start + k, slow_from, slow_to, v,
                                                   0.4 * v, 8.0);
                   },
                   [](std::size_t, double) { return false; }));
  neighbor.marks.push_back({"slowdown", slow_from, slow_to});

  s.actors = {std::move(neighbor), std::move(turner),
              detail::straight_actor(2, r, 30, {40, 360}, v, 180)};
  return s;
}

/// Two crossing pairs on mirrored diagonals; each actor detours around the
/// center and slows through it. The second pair follows 50 frames later.
inline ScenarioScript scenario_s4() {
  ScenarioScript s;
  s.name = "s4_counterflow";
  const double r = 15.0;
  const double v = kCruisePxPerFrame;
  const double slow = 1.4;
  const double ramp = 15.0;
  const std::vector<Point2> down_right{{50, 140}, {270, 205}, {370, 205}, {590, 320}};
  const std::vector<Point2> up_left{{590, 350}, {370, 285}, {270, 285}, {50, 170}};

  const auto make = [&](int id, const std::vector<Point2>& path, std::size_t start) {
    const double z0 = distance(path[0], path[1]) - 20.0;
    const double z1 = z0 + 20.0 + distance(path[1], path[2]) + 20.0;
    const auto speed = [&](std::size_t, double sv) {
      if (sv < z0 || sv > z1) return v;
      if (sv < z0 + ramp) return v + (slow - v) * (sv - z0) / ramp;
      if (sv > z1 - ramp) return slow + (v - slow) * (sv - (z1 - ramp)) / ramp;
      return slow;
    };
    std::vector<double> arc;
    auto wps = detail::walk(path, start, speed, [](std::size_t, double) { return false; }, &arc);
    ActorPath a = detail::make_actor(id, r, wps);
    a.marks.push_back(detail::arc_window("intersection", wps, arc, z0, z1));
    return a;
  };
  s.actors = {make(0, down_right, 0), make(1, up_left, 0), make(2, down_right, 50),
              make(3, up_left, 50)};
  return s;
}

inline ScenarioScript scenario_s5() {
  ScenarioScript s;
  s.name = "s5_backforth";
  ActorPath a;
  a.actor_id = 0;
  a.head_radius_px = 14.0;
  // 339 px legs at 3 px/frame, turning around instantly at each end.
  const double left = 150.0;
  const double leg = 339.0;
  const std::size_t leg_frames = 113;
  std::size_t f = 0;
  bool rightward = true;
  while (f < s.n_frames) {
    a.waypoints.push_back({f, {rightward ? left : left + leg, 240.0}});
    f += leg_frames;
    rightward = !rightward;
  }
  a.waypoints.push_back({f, {rightward ? left : left + leg, 240.0}});
  s.actors = {a};
  return s;
}

inline std::vector<ScenarioScript> builtin_scenarios() {
  return {scenario_s1(), scenario_s2(), scenario_s3(), scenario_s4(), scenario_s5()};
}

inline std::vector<std::string> builtin_names() {
  std::vector<std::string> names;
  for (const auto& s : builtin_scenarios()) names.push_back(s.name);
  return names;
}

/// Looks up a builtin by full name ("s3_uturn") or short prefix ("s3").
inline std::optional<ScenarioScript> find_builtin(std::string_view name) {
  for (auto& s : builtin_scenarios()) {
    if (s.name == name || s.name.substr(0, s.name.find('_')) == name) return s;
  }
  return std::nullopt;
}

/// Detection preset matching each builtin; the back-and-forth walk uses the
/// one-way preset.
inline DetectionParams default_params_for(std::string_view scenario_name) {
  if (scenario_name.starts_with("s2")) return preset(2);
  if (scenario_name.starts_with("s3")) return preset(3);
  if (scenario_name.starts_with("s4")) return preset(4);
  return preset(1);
}

}  // namespace pedtrack
