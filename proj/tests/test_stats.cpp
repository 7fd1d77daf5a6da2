#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "smaug/features.hpp"
#include "smaug/stats.hpp"

namespace smaug {
namespace {

std::vector<double> random_sample(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> scale(-3, 3);
  const double s = std::pow(10.0, scale(rng));
  std::uniform_real_distribution<double> value(-s, s);
  std::vector<double> out(n);
  for (auto& v : out) v = value(rng);
  return out;
}

TEST(Stats, HandComputedMoments) {
  const std::vector<double> s{2, 4, 4, 4, 5, 5, 7, 9};
  EXPECT_DOUBLE_EQ(arithmetic_mean(s), 5.0);
  EXPECT_DOUBLE_EQ(variance(s), 32.0 / 7.0);
  EXPECT_DOUBLE_EQ(root_mean_square(s), std::sqrt(232.0 / 8.0));
  EXPECT_DOUBLE_EQ(mean_absolute_deviation(s), std::sqrt(12.0 / 7.0));
  EXPECT_DOUBLE_EQ(median(s), 4.5);
  const std::vector<double> sym{-1, 0, 1};
  EXPECT_DOUBLE_EQ(skewness(sym), 0.0);
  // z = -1, 0, 1 with stdev 1: sum z^4 / 2 = 1.
  EXPECT_DOUBLE_EQ(kurtosis(sym), 1.0);
}

TEST(Stats, DegenerateInputsAreZero) {
  const std::vector<double> empty, one{3.5}, flat{2, 2, 2};
  for (const auto* s : {&empty, &one, &flat}) {
    EXPECT_EQ(variance(*s), 0.0);
    EXPECT_EQ(mean_absolute_deviation(*s), 0.0);
    EXPECT_EQ(skewness(*s), 0.0);
    EXPECT_EQ(kurtosis(*s), 0.0);
  }
  EXPECT_EQ(arithmetic_mean(empty), 0.0);
  EXPECT_EQ(arithmetic_mean(flat), 2.0);
  EXPECT_EQ(pearson(flat, std::vector<double>{1, 2, 3}), 0.0);
  EXPECT_EQ(pearson(one, one), 0.0);
}

TEST(Stats, MatchesDefinitionalOracles) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> len(2, 200);
  for (int i = 0; i < 500; ++i) {
    const auto s = random_sample(rng, len(rng));
    const auto st = summarize(s);
    EXPECT_TRUE(oracle::close(st.am, oracle::am(s)));
    EXPECT_TRUE(oracle::close(st.rms, oracle::rms(s)));
    EXPECT_TRUE(oracle::close(st.var, oracle::var(s)));
    EXPECT_TRUE(oracle::close(st.stdev, oracle::stdev(s)));
    EXPECT_TRUE(oracle::close(st.mad, oracle::mad(s)));
    EXPECT_TRUE(oracle::close(st.skew, oracle::skew(s)));
    EXPECT_TRUE(oracle::close(st.kurt, oracle::kurt(s)));
    EXPECT_EQ(median(s), oracle::median(s));
    const auto t = random_sample(rng, s.size());
    EXPECT_TRUE(oracle::close(pearson(s, t), oracle::pearson(s, t)));
  }
}

TEST(Stats, PearsonOfLinearRelationIsOne) {
  const std::vector<double> a{1, 2, 3, 4, 5}, b{3, 5, 7, 9, 11}, c{-1, -2, -3, -4, -5};
  EXPECT_DOUBLE_EQ(pearson(a, b), 1.0);
  EXPECT_DOUBLE_EQ(pearson(a, c), -1.0);
}

TEST(Stats, FiveStatOrdering) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto s = random_sample(rng, 10);
    const auto f = five_stat(s);
    EXPECT_LE(f.min, f.am);
    EXPECT_LE(f.am, f.max);
    EXPECT_LE(f.min, f.median);
    EXPECT_LE(f.median, f.max);
    EXPECT_GE(f.stdev, 0.0);
  }
}

TEST(MatrixNorms, HandComputed) {
  const std::array<std::vector<double>, 3> m{std::vector<double>{1, -4}, {2, 5}, {-3, 6}};
  const auto n = matrix_norms(m);
  EXPECT_DOUBLE_EQ(n.one, 9.0);  // column |-3| + |6|
  EXPECT_DOUBLE_EQ(n.inf, 15.0);
  EXPECT_DOUBLE_EQ(n.frobenius, std::sqrt(91.0));
  ASSERT_EQ(n.rowSquaredL2.size(), 2u);
  EXPECT_DOUBLE_EQ(n.rowSquaredL2[0], 14.0);
  EXPECT_DOUBLE_EQ(n.rowSquaredL2[1], 77.0);
}

TEST(MatrixNorms, MatchesOracle) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<std::size_t> len(1, 150);
  for (int i = 0; i < 500; ++i) {
    const auto n = len(rng);
    const std::array<std::vector<double>, 3> m{random_sample(rng, n), random_sample(rng, n), random_sample(rng, n)};
    const auto got = matrix_norms(m);
    const auto want = oracle::norms(m);
    EXPECT_TRUE(oracle::close(got.one, want.one));
    EXPECT_TRUE(oracle::close(got.inf, want.inf));
    EXPECT_TRUE(oracle::close(got.frobenius, want.frobenius));
    ASSERT_EQ(got.rowSquaredL2.size(), want.rowSquared.size());
    for (std::size_t r = 0; r < n; ++r) EXPECT_TRUE(oracle::close(got.rowSquaredL2[r], want.rowSquared[r]));
  }
}

TEST(FusionAngles, HandComputed) {
  EXPECT_DOUBLE_EQ(vector_angle({1, 0, 0}, {0, 1, 0}), std::acos(0.0));
  EXPECT_DOUBLE_EQ(vector_angle({1, 1, 0}, {2, 2, 0}), 0.0);
  EXPECT_DOUBLE_EQ(vector_angle({1, 0, 0}, {-3, 0, 0}), std::acos(-1.0));
  EXPECT_EQ(vector_angle({0, 0, 0}, {1, 2, 3}), 0.0);
}

TEST(FusionAngles, SeriesMatchOracle) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> v(-5, 5);
  std::uniform_int_distribution<std::int64_t> dt(2'000'000, 8'000'000);
  for (int i = 0; i < 100; ++i) {
    std::vector<FusionEvent> fusion(30);
    std::int64_t t = 1'000'000'000;
    for (auto& e : fusion) {
      e.timeNs = t += dt(rng);
      for (int k = 0; k < 3; ++k) {
        e.gyro[k] = v(rng);
        e.accel[k] = v(rng);
      }
    }
    const auto series = motion_fusion_series(fusion);

    // Oracle: differentiate each axis independently, then take angles.
    std::vector<std::int64_t> times;
    std::array<std::vector<double>, 3> g, a;
    for (const auto& e : fusion) {
      times.push_back(e.timeNs);
      for (int k = 0; k < 3; ++k) {
        g[k].push_back(e.gyro[k]);
        a[k].push_back(e.accel[k]);
      }
    }
    auto gt = times;
    for (int order = 0; order < 3; ++order) {
      const auto& angles = series.angles[2 * order];
      ASSERT_EQ(angles.size(), gt.size());
      std::vector<double> expect;
      for (std::size_t r = 0; r < gt.size(); ++r) {
        expect.push_back(oracle::angle({g[0][r], g[1][r], g[2][r]}, {a[0][r], a[1][r], a[2][r]}));
        EXPECT_TRUE(oracle::close(angles[r], expect.back(), 1e-9)) << order << " " << r;
      }
      std::vector<std::int64_t> rt;
      std::vector<double> rate;
      oracle::derive(gt, expect, rt, rate);
      const auto& got = series.angles[2 * order + 1];
      ASSERT_EQ(got.size(), rate.size());
      for (std::size_t r = 0; r < rate.size(); ++r) EXPECT_TRUE(oracle::close(got[r], rate[r], 1e-6));

      std::array<std::vector<double>, 3> ng, na;
      std::vector<std::int64_t> nt;
      for (int k = 0; k < 3; ++k) {
        nt.clear();
        oracle::derive(gt, g[k], nt, ng[k]);
        nt.clear();
        oracle::derive(gt, a[k], nt, na[k]);
      }
      g = ng;
      a = na;
      gt = nt;
    }
  }
}

}  // namespace
}  // namespace smaug
