#include "smaug/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace smaug {

namespace {

bool constant(std::span<const double> s) {
  return std::adjacent_find(s.begin(), s.end(), std::not_equal_to<>()) == s.end();
}

// Sum of ((s_i - mean) / sd)^power, divided by (n - 1).
double standardized_moment(std::span<const double> s, int power) {
  if (s.size() < 2) return 0.0;
  const double am = arithmetic_mean(s);
  const double sd = standard_deviation(s);
  if (sd == 0.0) return 0.0;
  double acc = 0.0;
  for (double v : s) {
    const double z = (v - am) / sd;
    acc += power == 3 ? z * z * z : z * z * z * z;
  }
  return acc / static_cast<double>(s.size() - 1);
}

}  // namespace

double arithmetic_mean(std::span<const double> s) {
  if (s.empty()) return 0.0;
  if (constant(s)) return s.front();
  double acc = 0.0;
  for (double v : s) acc += v;
  return acc / static_cast<double>(s.size());
}

double root_mean_square(std::span<const double> s) {
  if (s.empty()) return 0.0;
  double acc = 0.0;
  for (double v : s) acc += v * v;
  return std::sqrt(acc / static_cast<double>(s.size()));
}

double variance(std::span<const double> s) {
  if (s.size() < 2 || constant(s)) return 0.0;
  const double am = arithmetic_mean(s);
  double acc = 0.0;
  for (double v : s) acc += (v - am) * (v - am);
  return acc / static_cast<double>(s.size() - 1);
}

double standard_deviation(std::span<const double> s) { return std::sqrt(variance(s)); }

double mean_absolute_deviation(std::span<const double> s) {
  if (s.size() < 2 || constant(s)) return 0.0;
  const double am = arithmetic_mean(s);
  double acc = 0.0;
  for (double v : s) acc += std::abs(v - am);
  return std::sqrt(acc / static_cast<double>(s.size() - 1));
}

double skewness(std::span<const double> s) { return standardized_moment(s, 3); }

double kurtosis(std::span<const double> s) { return standardized_moment(s, 4); }

double median(std::span<const double> s) {
  if (s.empty()) return 0.0;
  std::vector<double> sorted(s.begin(), s.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = sorted.size();
  if (n % 2 == 1) return sorted[n / 2];
  return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) return 0.0;
  const double ma = arithmetic_mean(a);
  const double mb = arithmetic_mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double da = a[k] - ma;
    const double db = b[k] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

SequenceStats summarize(std::span<const double> s) {
  SequenceStats out;
  if (s.empty()) return out;
  const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
  out.min = *lo;
  out.max = *hi;
  out.am = std::clamp(arithmetic_mean(s), out.min, out.max);
  out.rms = root_mean_square(s);
  out.var = variance(s);
  out.stdev = std::sqrt(out.var);
  out.mad = mean_absolute_deviation(s);
  out.skew = skewness(s);
  out.kurt = kurtosis(s);
  return out;
}

FiveStat five_stat(std::span<const double> s) {
  FiveStat out;
  if (s.empty()) return out;
  const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
  out.min = *lo;
  out.max = *hi;
  out.stdev = standard_deviation(s);
  out.median = median(s);
  out.am = std::clamp(arithmetic_mean(s), out.min, out.max);
  return out;
}

}  // namespace smaug
