#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "smaug/features.hpp"
#include "smaug/synth.hpp"

namespace smaug {
namespace {

TouchEvent at(std::int64_t t, double x, double y, TouchAction a = TouchAction::Move) {
  TouchEvent e;
  e.timeNs = t;
  e.x = x;
  e.y = y;
  e.action = a;
  e.pressure = 0.5;
  e.size = 0.2;
  return e;
}

TEST(TouchEventFeatures, HandComputedStroke) {
  // Straight line at constant speed then a right-angle turn.
  const std::vector<TouchEvent> s{at(100, 0, 0, TouchAction::Down), at(110, 10, 0), at(120, 20, 0),
                                  at(130, 20, 10, TouchAction::Up)};
  const auto f = touch_event_features(s, 100);
  EXPECT_EQ(f.t, (std::vector<double>{0, 10, 20, 30}));
  EXPECT_EQ(f.vx, (std::vector<double>{1, 1, 0}));
  EXPECT_EQ(f.vy, (std::vector<double>{0, 0, 1}));
  EXPECT_EQ(f.ax, (std::vector<double>{0, -0.1}));
  EXPECT_EQ(f.ay, (std::vector<double>{0, 0.1}));
  ASSERT_EQ(f.direction.size(), 3u);
  EXPECT_DOUBLE_EQ(f.direction[2], std::numbers::pi / 2);
  ASSERT_EQ(f.curvature.size(), 2u);
  EXPECT_EQ(f.curvature[0], 0.0);
  // phi = (-10, 10), theta = (5, 5): (4*10*5 + 4*10*5) / 50^1.5.
  EXPECT_DOUBLE_EQ(f.curvature[1], 400.0 / std::pow(50.0, 1.5));
}

TEST(TouchEventFeatures, DuplicateTimestampsYieldNoQuotient) {
  const std::vector<TouchEvent> s{at(0, 0, 0), at(0, 5, 0), at(10, 10, 0)};
  const auto f = touch_event_features(s, 0);
  EXPECT_EQ(f.vx, (std::vector<double>{0.5}));
  EXPECT_TRUE(f.ax.empty());
}

TEST(TouchEventFeatures, DirectionIsInHalfOpenInterval) {
  const std::vector<TouchEvent> s{at(0, 10, 0), at(10, 0, 0)};
  EXPECT_DOUBLE_EQ(touch_event_features(s, 0).direction[0], std::numbers::pi);
}

TEST(Differentiate, MatchesOracle) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> v(-10, 10);
  std::uniform_int_distribution<std::int64_t> dt(0, 6'000'000);
  for (int i = 0; i < 200; ++i) {
    std::vector<std::int64_t> t{0};
    std::array<std::vector<double>, 3> axes;
    for (int k = 0; k < 40; ++k) {
      if (k) t.push_back(t.back() + dt(rng));
      for (auto& a : axes) a.push_back(v(rng));
    }
    const auto d = differentiate(t, axes);
    for (int a = 0; a < 3; ++a) {
      std::vector<std::int64_t> t1, t2;
      std::vector<double> v1, v2;
      oracle::derive(t, axes[a], t1, v1);
      oracle::derive(t1, v1, t2, v2);
      EXPECT_EQ(d.times[1], t1);
      EXPECT_EQ(d.times[2], t2);
      ASSERT_EQ(d.values[1][a].size(), v1.size());
      ASSERT_EQ(d.values[2][a].size(), v2.size());
      for (std::size_t k = 0; k < v1.size(); ++k) EXPECT_TRUE(oracle::close(d.values[1][a][k], v1[k], 1e-12));
      for (std::size_t k = 0; k < v2.size(); ++k) EXPECT_TRUE(oracle::close(d.values[2][a][k], v2[k], 1e-9));
    }
  }
}

TEST(Features, NameTablesMatchVectorSizes) {
  EXPECT_EQ(round_feature_names().size(), kRoundFeatureCount);
  EXPECT_EQ(stroke_feature_names().size(), kStrokeFeatureCount);
  EXPECT_EQ(kStrokeFeatureCount, 106u);
  EXPECT_EQ(motion_feature_names().size(), kMotionFeatureCount);
  EXPECT_EQ(fusion_feature_names().size(), kFusionFeatureCount);
  EXPECT_EQ(fusion_sequence_names().size(), static_cast<std::size_t>(kFusionSequenceCount));
  EXPECT_EQ(bounded_round_features().size(), 7u);
  EXPECT_EQ(stroke_feature_names()[stroke_feature_index(StrokeSequence::VelX, Stat::Kurt)], "VX.kurt");
  EXPECT_EQ(stroke_feature_names()[stroke_feature_index(kPctLengthNs)], "pctLengthNs");
}

TEST(Features, ExtractedFromGeneratedRound) {
  const auto trace = synth::gen_trace(synth::find_shape("Bar"), synth::default_user_profile(), 2);
  const auto rf = extract_features(preprocess(trace));
  EXPECT_EQ(rf.stroke_count(), 2);
  ASSERT_EQ(rf.touchRound.size(), kRoundFeatureCount);
  EXPECT_EQ(rf.touchRound[kMaxPointers], 2.0);
  EXPECT_EQ(rf.touchRound[kStrokeCount], 2.0);
  EXPECT_EQ(rf.touchRound[kRecords], static_cast<double>(trace.touch.size()));
  for (const auto& row : rf.strokes) EXPECT_EQ(row.size(), kStrokeFeatureCount);
  ASSERT_TRUE(rf.gyro && rf.accel && rf.fusion && rf.fusionSeries);
  EXPECT_EQ(rf.gyro->size(), kMotionFeatureCount);
  EXPECT_EQ(rf.fusion->size(), kFusionFeatureCount);
  for (double v : *rf.gyro) EXPECT_TRUE(std::isfinite(v));

  double pct = 0;
  for (const auto& row : rf.strokes) pct += row[stroke_feature_index(kPctLengthPx)];
  EXPECT_NEAR(pct, 100.0, 1e-9);

  const auto& box = rf.touchRound;
  for (const auto& e : rf.round.touch.events) {
    EXPECT_LE(std::abs(e.x - box[kBoxCenterX]), box[kBoxWidth] / 2 + 1e-9);
    EXPECT_LE(std::abs(e.y - box[kBoxCenterY]), box[kBoxHeight] / 2 + 1e-9);
  }
  EXPECT_EQ(extract_features(preprocess(trace)), rf);
}

TEST(Features, MotionRoundFeaturesMatchOracle) {
  const auto trace = synth::gen_trace(synth::find_shape("Z"), synth::default_user_profile(), 4);
  const auto p = preprocess(trace);
  const auto series = motion_event_features(p.gyro);
  const auto f = motion_round_features(series);
  ASSERT_EQ(f.size(), kMotionFeatureCount);
  std::size_t k = 0;
  for (int o = 0; o < 3; ++o)
    for (int a = 0; a < 3; ++a) {
      const auto& s = series.values[o][a];
      for (double want : {oracle::am(s), oracle::rms(s), oracle::var(s), oracle::stdev(s), oracle::mad(s),
                          oracle::skew(s), oracle::kurt(s)})
        EXPECT_TRUE(oracle::close(f[k++], want)) << motion_feature_names()[k - 1];
    }
  for (int o = 0; o < 3; ++o) {
    const auto& c = series.values[o];
    const auto n = oracle::norms(c);
    for (double want : {oracle::pearson(c[0], c[1]), oracle::pearson(c[0], c[2]), oracle::pearson(c[1], c[2]), n.one,
                        n.inf, n.frobenius})
      EXPECT_TRUE(oracle::close(f[k++], want)) << motion_feature_names()[k - 1];
    const auto [lo, hi] = std::minmax_element(n.rowSquared.begin(), n.rowSquared.end());
    EXPECT_TRUE(oracle::close(f[k++], *lo));
    EXPECT_TRUE(oracle::close(f[k++], *hi));
    EXPECT_TRUE(oracle::close(f[k++], oracle::am(n.rowSquared)));
  }
}

TEST(Features, FusionRequiresEnoughEvents) {
  auto trace = synth::gen_trace(synth::find_shape("L"), synth::default_user_profile(), 1);
  auto p = preprocess(trace);
  p.fusion.resize(kMinFusionEvents - 1);
  const auto rf = extract_features(p);
  EXPECT_FALSE(rf.fusion);
  EXPECT_TRUE(rf.gyro);
}

TEST(Features, StrokeStructureFromDownEvent) {
  const auto trace = synth::gen_trace(synth::find_shape("Bar"), synth::default_user_profile(), 1);
  const auto p = preprocess(trace);
  EXPECT_EQ(stroke_structure(p.touch, 0).pointerNumber, 0);
  EXPECT_EQ(stroke_structure(p.touch, 1).pointerId, 1);
  EXPECT_EQ(stroke_structure(p.touch, 1).pointerNumber, 1);
}

}  // namespace
}  // namespace smaug
