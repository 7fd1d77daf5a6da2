#include <random>

#include <gtest/gtest.h>

#include "smaug/dtw.hpp"
#include "smaug/errors.hpp"
#include "smaug/synth.hpp"
#include "smaug/template.hpp"

namespace smaug {
namespace {

std::vector<RoundFeatures> generated_rounds(const std::string& shape, int count, int first = 1) {
  std::vector<RoundFeatures> out;
  for (int r = first; r < first + count; ++r)
    out.push_back(extract_features(preprocess(synth::gen_trace(synth::find_shape(shape), synth::default_user_profile(), r))));
  return out;
}

TEST(BestRound, HandComputed) {
  // Single-value sequences 0, 1, 3: average distances 4/3, 3/3, 5/3.
  const std::vector<double> a{0}, b{1}, c{3};
  const auto best = select_best_round({{a}, {b}, {c}});
  EXPECT_EQ(best.index, 1u);
  ASSERT_EQ(best.distances.size(), 1u);
  EXPECT_EQ(best.distances[0], (std::vector<double>{1, 0, 2}));
  ASSERT_EQ(best.meanNormalized.size(), 3u);
  EXPECT_DOUBLE_EQ(best.meanNormalized[0], 0.8);
  EXPECT_DOUBLE_EQ(best.meanNormalized[1], 0.6);
  EXPECT_DOUBLE_EQ(best.meanNormalized[2], 1.0);

  const auto stats = distance_stats(best);
  ASSERT_EQ(stats.size(), 1u);
  EXPECT_EQ(stats[0].min, 1.0);
  EXPECT_EQ(stats[0].max, 2.0);
  EXPECT_EQ(stats[0].am, 1.5);
}

TEST(BestRound, NormalizationBalancesFeatureScales) {
  // Raw distance sums would pick round 1 (1013 vs 1004). Normalized per
  // feature, the sums {3, 4, 5} and {1010, 1000, 1990} average to about
  // {0.554, 0.651, 1} and pick round 0.
  const std::vector<double> f0[3] = {{1}, {0}, {3}};
  const std::vector<double> f1[3] = {{0}, {10}, {1000}};
  std::vector<std::vector<std::span<const double>>> seqs;
  for (int r = 0; r < 3; ++r) seqs.push_back({f0[r], f1[r]});
  const auto best = select_best_round(seqs);
  EXPECT_EQ(best.index, 0u);
  EXPECT_DOUBLE_EQ(best.meanNormalized[0], (3.0 / 5.0 + 1010.0 / 1990.0) / 2);
}

TEST(BestRound, TiesPickLowestIndexAndZeroMaximum) {
  const std::vector<double> s{1, 2, 3};
  const auto best = select_best_round({{s}, {s}, {s}});
  EXPECT_EQ(best.index, 0u);
  for (double d : best.meanNormalized) EXPECT_EQ(d, 0.0);
}

TEST(Template, IdenticalRoundsHaveZeroSpread) {
  auto one = generated_rounds("A", 1);
  std::vector<RoundFeatures> rounds(10, one.front());
  const auto t = generate_template({}, rounds, 10);
  ASSERT_EQ(t.touchDtw.size(), 2u);
  for (const auto& s : t.touchDtw)
    for (const auto& d : s.distance) EXPECT_EQ(d, FiveStat{});
  for (const auto& row : t.touchStroke)
    for (const auto& fs : row) {
      EXPECT_EQ(fs.stdev, 0.0);
      EXPECT_EQ(fs.min, fs.max);
    }
  ASSERT_TRUE(t.gyro && t.accel && t.fusion && t.fusionDtw);
  EXPECT_EQ(t.stroke_count(), 2);
  EXPECT_FALSE(t.multi_touch());
}

TEST(Template, TablesHaveExpectedShapes) {
  const auto t = generate_template({}, generated_rounds("Bar", 10), 10);
  EXPECT_EQ(t.stroke_count(), 2);
  EXPECT_TRUE(t.multi_touch());
  EXPECT_EQ(t.touchGesture.bounded.size(), bounded_round_features().size());
  ASSERT_EQ(t.touchStroke.size(), 2u);
  EXPECT_EQ(t.touchStroke[0].size(), kStrokeFeatureCount);
  EXPECT_EQ(t.gyro->size(), kMotionFeatureCount);
  EXPECT_EQ(t.fusion->size(), kFusionFeatureCount);
  for (const auto& s : t.touchDtw) {
    EXPECT_LT(s.bestRound, 10u);
    for (const auto& d : s.distance) {
      EXPECT_GT(d.max, 0.0);
      EXPECT_LE(d.min, d.am);
    }
  }
}

TEST(Template, DtwDistancesMatchDirectComputation) {
  const auto rounds = generated_rounds("L", 10);
  const auto t = touch_dtw_template(rounds);
  const auto r = t[0].bestRound;
  std::vector<double> xs;
  for (std::size_t k = 0; k < rounds.size(); ++k)
    if (k != r) xs.push_back(dtw(rounds[r].strokeSeries[0].x, rounds[k].strokeSeries[0].x));
  EXPECT_EQ(t[0].distance[kDtwX], five_stat(xs));
}

TEST(Template, MotionTablesAbsentWhenAnyRoundLacksMotion) {
  auto rounds = generated_rounds("L", 10);
  rounds[4].gyro.reset();
  rounds[7].fusion.reset();
  rounds[7].fusionSeries.reset();
  const auto t = generate_template({}, rounds, 10);
  EXPECT_FALSE(t.gyro);
  EXPECT_TRUE(t.accel);
  EXPECT_FALSE(t.fusion);
  EXPECT_FALSE(t.fusionDtw);
}

TEST(Template, RoundCountAndStrokeCountErrors) {
  EXPECT_THROW(generate_template({}, generated_rounds("L", 9), 10), InsufficientRounds);
  auto rounds = generated_rounds("L", 10);
  rounds[6] = generated_rounds("A", 1).front();
  try {
    generate_template({}, rounds, 10);
    FAIL();
  } catch (const StrokeCountMismatch& e) {
    EXPECT_EQ(e.round(), 7);
  }
}

}  // namespace
}  // namespace smaug
