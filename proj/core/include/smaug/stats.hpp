#pragma once

#include <span>

namespace smaug {

// Descriptive statistics over a sample s of size n. Dispersion and moment
// statistics normalize by (n - 1). Degenerate inputs (empty, single value,
// zero spread) yield 0 rather than NaN.

double arithmetic_mean(std::span<const double> s);
double root_mean_square(std::span<const double> s);
double variance(std::span<const double> s);
double standard_deviation(std::span<const double> s);

/// sqrt( sum |s_i - AM| / (n - 1) ). Note the outer square root: this is the
/// engine's historical definition, not the textbook mean absolute deviation.
double mean_absolute_deviation(std::span<const double> s);

/// sum ((s_i - AM) / StDev)^3 / (n - 1); 0 for zero spread.
double skewness(std::span<const double> s);

/// sum ((s_i - AM) / StDev)^4 / (n - 1); 0 for zero spread.
double kurtosis(std::span<const double> s);

/// Middle order statistic; mean of the two middle values for even n.
double median(std::span<const double> s);

/// Sample Pearson correlation, clamped to [-1, 1]; 0 if either side has no
/// spread or the lengths differ.
double pearson(std::span<const double> a, std::span<const double> b);

/// The nine per-sequence statistics of a stroke or motion axis.
struct SequenceStats {
  double min = 0, max = 0, am = 0, rms = 0, var = 0, stdev = 0, mad = 0, skew = 0, kurt = 0;
};

SequenceStats summarize(std::span<const double> s);

/// Template summary of a feature over enrollment rounds.
struct FiveStat {
  double min = 0, max = 0, stdev = 0, median = 0, am = 0;

  friend bool operator==(const FiveStat&, const FiveStat&) = default;
};

FiveStat five_stat(std::span<const double> s);

}  // namespace smaug
