#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "pedtrack/output.hpp"
#include "pedtrack/synth.hpp"

using namespace pedtrack;

namespace {

Track make_track(int id, const std::vector<Point2>& pts, std::size_t first = 0) {
  Track t;
  t.id = id;
  t.display_color = track_color(id);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const BoundingBox b = BoundingBox::centered_on(pts[i], 50, 50, 640, 480);
    t.history.push_back({pts[i], first + i, PointFlag::measured, b});
    t.current_box = b;
  }
  return t;
}

std::vector<Point2> line_pts(Point2 from, Point2 step, int n) {
  std::vector<Point2> out;
  for (int i = 0; i < n; ++i) out.push_back({from.x + step.x * i, from.y + step.y * i});
  return out;
}

}  // namespace

TEST(Palette, DistinctAndNeverBlack) {
  const AnnotationStyle style;
  std::set<std::tuple<int, int, int>> seen;
  for (const auto* pal : {&style.lr_palette, &style.rl_palette}) {
    for (const Rgb c : *pal) {
      seen.insert({c.r, c.g, c.b});
      for (int s = 1; s <= 4; ++s) EXPECT_FALSE(is_black_pixel(c, preset(s).black_max));
    }
  }
  EXPECT_EQ(seen.size(), style.lr_palette.size() + style.rl_palette.size());
}

TEST(Groups, ByNetDisplacement) {
  const auto lr = make_track(0, line_pts({100, 100}, {3, 0}, 5));
  const auto rl = make_track(1, line_pts({400, 100}, {-3, 0}, 5));
  const auto still = make_track(2, line_pts({300, 300}, {0, 0}, 5));
  EXPECT_EQ(group_of(lr), TrackGroup::left_to_right);
  EXPECT_EQ(group_of(rl), TrackGroup::right_to_left);
  EXPECT_EQ(group_of(still), TrackGroup::stationary);
  const AnnotationStyle style;
  const auto colors = assign_colors({lr, rl, still}, style);
  EXPECT_EQ(colors.at(0), style.lr_palette[0]);
  EXPECT_EQ(colors.at(1), style.rl_palette[0]);
  EXPECT_EQ(colors.at(2), still.display_color);
}

TEST(DrawLine, EndpointsAndConnectivity) {
  Frame f(20, 20, Rgb{0, 0, 0});
  draw_line(f, 2, 3, 15, 9, {255, 0, 0});
  EXPECT_EQ(f.at(2, 3), (Rgb{255, 0, 0}));
  EXPECT_EQ(f.at(15, 9), (Rgb{255, 0, 0}));
  int painted = 0;
  for (int y = 0; y < 20; ++y)
    for (int x = 0; x < 20; ++x) painted += f.at(x, y).r == 255;
  EXPECT_EQ(painted, 14);  // one pixel per column along the major axis
  Frame g(5, 5, Rgb{0, 0, 0});
  draw_line(g, -10, 2, 10, 2, {1, 1, 1});  // clipped, no crash
  EXPECT_EQ(g.at(0, 2), (Rgb{1, 1, 1}));
  EXPECT_EQ(g.at(4, 2), (Rgb{1, 1, 1}));
}

TEST(Annotate, NoTracksIsIdentity) {
  const Frame f(64, 48, Rgb{230, 230, 230});
  EXPECT_EQ(oracle::bytes(annotate_frame(f, {})), oracle::bytes(f));
}

TEST(Annotate, SinglePointDrawsOnlyTheBox) {
  const Frame f(640, 480, Rgb{230, 230, 230});
  const auto t = make_track(0, {{100, 100}});
  const auto lines = visible_trajectories({t}, 0);
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_EQ(lines[0].segments(), 0u);
  const Frame out = annotate_frame(f, {t});
  const BoundingBox b = t.history[0].box;
  int changed = 0;
  for (int y = 0; y < 480; ++y) {
    for (int x = 0; x < 640; ++x) {
      if (out.at(x, y) == f.at(x, y)) continue;
      ++changed;
      const bool on_outline = (x == b.x || x == b.right() - 1 || y == b.y || y == b.bottom() - 1) &&
                              x >= b.x && x < b.right() && y >= b.y && y < b.bottom();
      EXPECT_TRUE(on_outline) << x << "," << y;
      EXPECT_EQ(out.at(x, y), (Rgb{255, 255, 255}));
    }
  }
  EXPECT_EQ(changed, 2 * 50 + 2 * 48);
}

TEST(Annotate, ChangesOnlyDrawnPrimitives) {
  // Reference mask: every pixel a primitive may touch, rasterized onto a
  // blank canvas in a unique marker color.
  const Frame f(640, 480, Rgb{230, 230, 230}, 39);
  const std::vector<Track> tracks{make_track(0, line_pts({60, 60}, {2.6, 1.3}, 40)),
                                  make_track(1, line_pts({500, 400}, {-3.1, -0.7}, 40))};
  const Frame out = annotate_frame(f, tracks);
  Frame mask(640, 480, Rgb{0, 0, 0});
  for (const auto& t : tracks) {
    for (std::size_t i = 1; i < t.history.size(); ++i) {
      draw_line(mask, std::lround(t.history[i - 1].com.x), std::lround(t.history[i - 1].com.y),
                std::lround(t.history[i].com.x), std::lround(t.history[i].com.y), {1, 1, 1});
    }
    draw_box_outline(mask, t.history.back().box, {1, 1, 1});
  }
  for (int y = 0; y < 480; ++y)
    for (int x = 0; x < 640; ++x)
      if (mask.at(x, y).r == 0) ASSERT_EQ(out.at(x, y), f.at(x, y)) << x << "," << y;
}

TEST(Annotate, ScenarioOneAtFrame100) {
  const auto script = scenario_s1();
  std::vector<Track> tracks;
  for (const auto& a : script.actors) {
    std::vector<Point2> pts;
    for (std::size_t k = a.enter_frame(); k <= a.exit_frame(); ++k) pts.push_back(*a.position(k));
    tracks.push_back(make_track(a.actor_id, pts, a.enter_frame()));
  }
  const auto lines = visible_trajectories(tracks, 100);
  ASSERT_EQ(lines.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(lines[i].segments(), 100 - script.actors[i].enter_frame());
  }
  // A track that ended before frame 190 is not drawn there.
  EXPECT_EQ(visible_trajectories(tracks, 185).size(), 2u);
}

TEST(Csv, HeaderOnlyForNoTracks) {
  EXPECT_EQ(export_csv({}, {}, SceneCalibration::corridor()),
            "track_id,frame,t_s,x_px,y_px,x_m,y_m,step_m,cum_m,v_mps,a_mps2,flag\n");
}

TEST(Csv, StationaryTrackHasZeroCumulative) {
  const auto cal = SceneCalibration::corridor();
  const auto t = make_track(3, line_pts({200, 150}, {0, 0}, 3));
  const auto rows = parse_tracks_csv(export_csv({compile_series(t, cal)}, {t}, cal));
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) EXPECT_EQ(r.cum_m, 0.0);
  EXPECT_FALSE(rows[0].v_mps);
  EXPECT_FALSE(rows[1].a_mps2);
  EXPECT_TRUE(rows[2].a_mps2);
}

TEST(Csv, ScenarioOneCumulativeAtFrame100) {
  const auto cal = SceneCalibration::corridor();
  const auto script = scenario_s1();
  const auto& a = script.actors[0];
  std::vector<Point2> pts;
  for (std::size_t k = a.enter_frame(); k <= a.exit_frame(); ++k) pts.push_back(*a.position(k));
  const auto t = make_track(0, pts, a.enter_frame());
  const auto rows = parse_tracks_csv(export_csv({compile_series(t, cal)}, {t}, cal));
  EXPECT_EQ(rows[100].frame, 100u);
  EXPECT_NEAR(rows[100].cum_m, 0.9375, 1e-6);
}

TEST(Csv, RoundTripToPrintedPrecision) {
  const auto cal = SceneCalibration::lobby();
  std::vector<Track> tracks{make_track(0, line_pts({50.123, 60.987}, {2.71, 0.33}, 30), 5),
                            make_track(1, line_pts({600.5, 300.25}, {-1.9, 1.1}, 12), 9)};
  tracks[0].history[4].flag = PointFlag::held;
  std::vector<KinematicsSeries> series;
  for (const auto& t : tracks) series.push_back(compile_series(t, cal));
  const auto rows = parse_tracks_csv(export_csv(series, tracks, cal));
  ASSERT_EQ(rows.size(), 42u);
  const auto near6 = [](double got, double want) {
    EXPECT_NEAR(got, want, std::max(1e-12, std::abs(want) * 1e-5));
  };
  std::size_t r = 0;
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    for (std::size_t k = 0; k < tracks[i].history.size(); ++k, ++r) {
      const auto& row = rows[r];
      const auto& s = series[i].samples[k];
      EXPECT_EQ(row.track_id, tracks[i].id);
      EXPECT_EQ(row.frame, s.frame);
      near6(row.t_s, s.t);
      near6(row.x_px, tracks[i].history[k].com.x);
      near6(row.y_px, tracks[i].history[k].com.y);
      near6(row.x_m, tracks[i].history[k].com.x * 2.5 / 640);
      near6(row.y_m, tracks[i].history[k].com.y * 1.8 / 480);
      near6(row.step_m, s.step_distance_m);
      near6(row.cum_m, s.cumulative_distance_m);
      EXPECT_EQ(row.v_mps.has_value(), s.velocity_mps.has_value());
      if (s.velocity_mps) near6(*row.v_mps, *s.velocity_mps);
      EXPECT_EQ(row.a_mps2.has_value(), s.acceleration_mps2.has_value());
      if (s.acceleration_mps2) near6(*row.a_mps2, *s.acceleration_mps2);
      EXPECT_EQ(row.flag, tracks[i].history[k].flag);
    }
  }
}

TEST(Csv, ParseRejectsMalformed) {
  EXPECT_THROW(parse_tracks_csv("bogus\n"), LoadError);
  std::string header(kCsvHeader);
  EXPECT_THROW(parse_tracks_csv(header + "\n1,2,3\n"), LoadError);
  EXPECT_THROW(parse_tracks_csv(header + "\n0,0,0,1,1,0,0,0,0,,,maybe\n"), LoadError);
  EXPECT_THROW(parse_tracks_csv(header + "\n0,0,x,1,1,0,0,0,0,,,held\n"), LoadError);
}

TEST(Chart, ConstantVelocityIsHorizontal) {
  const auto cal = SceneCalibration::corridor();
  const auto t = make_track(0, line_pts({40, 240}, {3, 0}, 60));
  const auto chart = build_chart({compile_series(t, cal)}, ChartQuantity::velocity);
  ASSERT_EQ(chart.series.size(), 1u);
  ASSERT_EQ(chart.series[0].points.size(), 59u);
  std::set<double> ys;
  for (const auto& p : chart.series[0].points) {
    EXPECT_NEAR(p.y, 0.28125, 1e-12);
    ys.insert(std::round(chart.axes.to_svg(p).y * 1e6));
  }
  EXPECT_EQ(ys.size(), 1u);
  const auto svg = render_svg(chart);
  EXPECT_NE(svg.find("m/s"), std::string::npos);
  EXPECT_NE(svg.find("time (s)"), std::string::npos);
  EXPECT_NE(svg.find("data-track=\"0\""), std::string::npos);
}

TEST(Chart, PointsAreTheSeriesUnderAffineMap) {
  const auto cal = SceneCalibration::corridor();
  const auto t = make_track(2, line_pts({40, 100}, {2.2, 1.7}, 25));
  const auto s = compile_series(t, cal);
  const auto chart = build_chart({s}, ChartQuantity::distance);
  ASSERT_EQ(chart.series[0].points.size(), s.samples.size());
  for (std::size_t i = 0; i < s.samples.size(); ++i) {
    EXPECT_EQ(chart.series[0].points[i].x, s.samples[i].t);
    EXPECT_EQ(chart.series[0].points[i].y, s.samples[i].cumulative_distance_m);
    if (i) EXPECT_GE(chart.series[0].points[i].y, chart.series[0].points[i - 1].y);
  }
  const auto& ax = chart.axes;
  const Point2 lo = ax.to_svg({ax.x_min, ax.y_min});
  const Point2 hi = ax.to_svg({ax.x_max, ax.y_max});
  EXPECT_DOUBLE_EQ(lo.x, ax.left);
  EXPECT_DOUBLE_EQ(lo.y, ax.top + ax.plot_h);
  EXPECT_DOUBLE_EQ(hi.x, ax.left + ax.plot_w);
  EXPECT_DOUBLE_EQ(hi.y, ax.top);
}

TEST(Chart, RightToLeftDistanceOffset) {
  const auto cal = SceneCalibration::corridor();
  const std::vector<Track> tracks{make_track(0, line_pts({100, 100}, {3, 0}, 10)),
                                  make_track(1, line_pts({500, 300}, {-3, 0}, 10))};
  std::vector<KinematicsSeries> series;
  for (const auto& t : tracks) series.push_back(compile_series(t, cal));
  const auto opts = chart_options_for(tracks, cal);
  EXPECT_EQ(opts.rl_distance_offset_m, 2.0);
  const auto doc = render_chart(series, ChartQuantity::distance, opts);
  EXPECT_EQ(doc.chart.series[0].points.front().y, 0.0);
  EXPECT_EQ(doc.chart.series[1].points.front().y, 2.0);
  EXPECT_NE(doc.svg.find("RL offset +2 m"), std::string::npos);
  EXPECT_NE(doc.data.find("RL offset 2 m"), std::string::npos);
  // Velocity charts carry no offset.
  EXPECT_EQ(build_chart(series, ChartQuantity::velocity, opts).rl_offset_m, 0.0);
}

TEST(Chart, EmptyIsChartError) {
  const auto cal = SceneCalibration::corridor();
  const auto t = make_track(0, {{10, 10}});
  EXPECT_THROW(build_chart({}, ChartQuantity::distance), ChartError);
  EXPECT_THROW(build_chart({compile_series(t, cal)}, ChartQuantity::velocity), ChartError);
  EXPECT_NO_THROW(build_chart({compile_series(t, cal)}, ChartQuantity::distance));
}

TEST(Chart, DeterministicBytes) {
  const auto cal = SceneCalibration::corridor();
  const auto t = make_track(0, line_pts({40, 100}, {2.2, 1.7}, 25));
  const auto a = render_chart({compile_series(t, cal)}, ChartQuantity::acceleration);
  const auto b = render_chart({compile_series(t, cal)}, ChartQuantity::acceleration);
  EXPECT_EQ(a.svg, b.svg);
  EXPECT_EQ(a.data, b.data);
}

TEST(Chart, SmoothingOnlyTouchesVelocityAndAcceleration) {
  const auto cal = SceneCalibration::corridor();
  auto pts = line_pts({40, 100}, {3, 0}, 20);
  pts[10].x += 2;
  const auto s = compile_series(make_track(0, pts), cal);
  ChartOptions o;
  o.smoothing_window = 5;
  const auto raw = build_chart({s}, ChartQuantity::velocity);
  const auto smooth = build_chart({s}, ChartQuantity::velocity, o);
  const auto vs = s.velocities();
  const auto expect = moving_average(vs, 5);
  for (std::size_t i = 0; i < expect.size(); ++i) {
    EXPECT_DOUBLE_EQ(smooth.series[0].points[i].y, expect[i]);
    EXPECT_DOUBLE_EQ(raw.series[0].points[i].y, vs[i]);
  }
  const auto d = build_chart({s}, ChartQuantity::distance, o);
  EXPECT_EQ(d.series[0].points.back().y, s.samples.back().cumulative_distance_m);
}
