#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "pedtrack/kinematics.hpp"
#include "pedtrack/synth.hpp"

using namespace pedtrack;

namespace {

std::vector<TrackPoint> history_of(const std::vector<Point2>& pts, std::size_t first = 0) {
  std::vector<TrackPoint> h;
  for (std::size_t i = 0; i < pts.size(); ++i) h.push_back({pts[i], first + i});
  return h;
}

}  // namespace

TEST(StepDistance, Examples) {
  const auto corridor = SceneCalibration::corridor();
  EXPECT_EQ(step_distance({5, 5}, {5, 5}, corridor), 0.0);
  EXPECT_NEAR(step_distance({10, 10}, {13, 10}, corridor), 0.009375, 1e-15);
  EXPECT_NEAR(step_distance({0, 0}, {3, 4}, SceneCalibration::lobby()), 0.0190349442227315, 1e-12);
}

TEST(VelocitySeries, Examples) {
  const double dt = 1.0 / 30.0;
  for (double v : velocity_series(std::vector<double>(5, 0.0), dt)) EXPECT_EQ(v, 0.0);
  for (double v : velocity_series(std::vector<double>(5, 0.009375), dt)) EXPECT_NEAR(v, 0.28125, 1e-12);
  const auto v = velocity_series(std::vector<double>{0.009375, 0.0}, dt);
  EXPECT_EQ(v[1], 0.0);
  EXPECT_THROW(velocity_series(std::vector<double>{1.0}, 0.0), ParameterError);
  EXPECT_THROW(velocity_series(std::vector<double>{1.0}, -1.0), ParameterError);
}

TEST(AccelerationSeries, Examples) {
  const double dt = 1.0 / 30.0;
  for (double a : acceleration_series(std::vector<double>(4, 0.28125), dt)) EXPECT_EQ(a, 0.0);
  const auto a = acceleration_series(std::vector<double>{0.28125, 0.28125, 0.0}, dt);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a[0], 0.0);
  EXPECT_NEAR(a[1], -8.4375, 1e-12);
  EXPECT_TRUE(acceleration_series(std::vector<double>{0.5}, dt).empty());
  EXPECT_THROW(acceleration_series(std::vector<double>{1.0, 2.0}, 0.0), ParameterError);
}

TEST(AccelerationSeries, LinearInDistances) {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> d(0.0, 0.02);
  const double dt = 1.0 / 30.0;
  std::vector<double> steps(50), doubled(50);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    steps[i] = d(rng);
    doubled[i] = 2.0 * steps[i];
  }
  const auto a1 = acceleration_series(velocity_series(steps, dt), dt);
  const auto a2 = acceleration_series(velocity_series(doubled, dt), dt);
  for (std::size_t i = 0; i < a1.size(); ++i) EXPECT_NEAR(a2[i], 2.0 * a1[i], 1e-9);
}

TEST(MovingAverage, Window) {
  const std::vector<double> x{1, 2, 3, 4, 10};
  EXPECT_EQ(moving_average(x, 1), x);
  const auto m = moving_average(x, 3);
  EXPECT_DOUBLE_EQ(m[0], 1.5);
  EXPECT_DOUBLE_EQ(m[1], 2.0);
  EXPECT_DOUBLE_EQ(m[3], 17.0 / 3.0);
  EXPECT_DOUBLE_EQ(m[4], 7.0);
  EXPECT_THROW(moving_average(x, 4), ParameterError);
}

TEST(CompileSeries, SingleSample) {
  const auto s = compile_series(7, history_of({{10, 10}}), SceneCalibration::corridor());
  EXPECT_EQ(s.track_id, 7);
  ASSERT_EQ(s.samples.size(), 1u);
  EXPECT_EQ(s.samples[0].cumulative_distance_m, 0.0);
  EXPECT_FALSE(s.samples[0].velocity_mps);
  EXPECT_FALSE(s.samples[0].acceleration_mps2);
  EXPECT_THROW(compile_series(0, std::vector<TrackPoint>{}, SceneCalibration::corridor()),
               ParameterError);
}

TEST(CompileSeries, ConstantVelocityClosedForm) {
  std::vector<Point2> pts;
  for (int i = 0; i < 300; ++i) pts.push_back({40.0 + 3 * i, 200});
  const auto cal = SceneCalibration::corridor();
  const auto s = compile_series(0, history_of(pts), cal);
  EXPECT_NEAR(s.samples.back().cumulative_distance_m, 299 * 0.009375, 1e-12);
  EXPECT_NEAR(s.samples.back().t, 299.0 / 30.0, 1e-12);
  for (std::size_t i = 1; i < s.samples.size(); ++i) {
    EXPECT_NEAR(*s.samples[i].velocity_mps, 0.28125, 1e-12);
    if (i > 1) EXPECT_NEAR(*s.samples[i].acceleration_mps2, 0.0, 1e-9);
  }
}

TEST(CompileSeries, StampsAtLaterFrame) {
  const auto s = compile_series(0, history_of({{0, 0}, {3, 0}, {3, 0}}, 40),
                                SceneCalibration::corridor());
  EXPECT_EQ(s.samples[1].frame, 41u);
  EXPECT_NEAR(s.samples[1].t, 41.0 / 30.0, 1e-12);
  EXPECT_NEAR(*s.samples[1].velocity_mps, 0.28125, 1e-12);
  EXPECT_EQ(*s.samples[2].velocity_mps, 0.0);
  EXPECT_NEAR(*s.samples[2].acceleration_mps2, -8.4375, 1e-9);
}

TEST(CompileSeries, UTurnOutAndBack) {
  const auto script = scenario_s3();
  const auto& turner = script.actors[1];
  std::vector<Point2> pts;
  for (std::size_t f = turner.enter_frame(); f <= turner.exit_frame(); ++f) {
    pts.push_back(*turner.position(f));
  }
  const auto cal = SceneCalibration::corridor();
  const auto s = compile_series(1, history_of(pts), cal);
  double far = 0.0;
  for (const auto& p : pts) far = std::max(far, p.x - pts.front().x);
  const double leg_m = far * 0.003125;
  const double net_m = step_distance(pts.front(), pts.back(), cal);
  // Out to the far point and back to within one step of the start.
  EXPECT_NEAR(s.samples.back().cumulative_distance_m, 2 * leg_m - net_m, 1e-9);
  EXPECT_LT(net_m, 0.15 * s.samples.back().cumulative_distance_m);
}

TEST(CompileSeries, TelescopingAndPathOverChord) {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> step(-4, 4);
  const auto cal = SceneCalibration::lobby();
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Point2> pts{{300, 200}};
    for (int i = 0; i < 120; ++i) pts.push_back({pts.back().x + step(rng), pts.back().y + step(rng)});
    const auto s = compile_series(0, history_of(pts), cal);
    double sum = 0.0;
    for (std::size_t i = 1; i < s.samples.size(); ++i) {
      sum += *s.samples[i].velocity_mps * cal.frame_interval_s();
      EXPECT_GE(s.samples[i].cumulative_distance_m, s.samples[i - 1].cumulative_distance_m);
      EXPECT_GE(*s.samples[i].velocity_mps, 0.0);
    }
    EXPECT_NEAR(sum, s.samples.back().cumulative_distance_m, 1e-9);
    EXPECT_GE(s.samples.back().cumulative_distance_m + 1e-12,
              step_distance(pts.front(), pts.back(), cal));
  }
}

TEST(CompileSeries, RasterJitterBound) {
  // Integer-rounded positions of a 2.7 px/frame walker: per-step velocity
  // deviates from the true speed by at most one pixel diagonal per frame.
  const auto cal = SceneCalibration::corridor();
  std::vector<Point2> pts;
  for (int i = 0; i < 200; ++i) pts.push_back({std::round(40 + 2.7 * i), std::round(100 + 0.9 * i)});
  const auto s = compile_series(0, history_of(pts), cal);
  const double truth = std::hypot(2.7, 0.9) * 0.003125 * 30.0;
  const double bound = std::sqrt(2.0) * 0.003125 * 30.0;
  for (std::size_t i = 1; i < s.samples.size(); ++i) {
    EXPECT_LE(std::abs(*s.samples[i].velocity_mps - truth), bound);
  }
}
