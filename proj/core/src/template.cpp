#include "smaug/template.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "smaug/dtw.hpp"
#include "smaug/errors.hpp"

namespace smaug {

namespace {

void require_equal_strokes(std::span<const std::size_t> counts) {
  if (counts.empty()) return;
  std::map<std::size_t, int> freq;
  for (auto c : counts) ++freq[c];
  const auto majority = std::max_element(freq.begin(), freq.end(), [](const auto& a, const auto& b) {
                          return a.second < b.second;
                        })->first;
  for (std::size_t r = 0; r < counts.size(); ++r)
    if (counts[r] != majority)
      throw StrokeCountMismatch(static_cast<int>(r + 1), static_cast<int>(majority), static_cast<int>(counts[r]));
}

std::vector<FiveStat> column_stats(std::span<const FeatureVector> rows) {
  std::vector<FiveStat> out;
  if (rows.empty()) return out;
  std::vector<double> column(rows.size());
  for (std::size_t f = 0; f < rows.front().size(); ++f) {
    for (std::size_t r = 0; r < rows.size(); ++r) column[r] = rows[r][f];
    out.push_back(five_stat(column));
  }
  return out;
}

}  // namespace

std::span<const std::string> touch_dtw_feature_names() {
  static const std::vector<std::string> names = {"x", "y", "t"};
  return names;
}

BestRound select_best_round(const std::vector<std::vector<std::span<const double>>>& sequences) {
  BestRound best;
  const std::size_t rounds = sequences.size();
  if (rounds == 0) return best;
  const std::size_t features = sequences.front().size();

  // pair[f][r][r'] symmetric, zero diagonal
  std::vector<std::vector<std::vector<double>>> pair(
      features, std::vector<std::vector<double>>(rounds, std::vector<double>(rounds, 0.0)));
  for (std::size_t f = 0; f < features; ++f)
    for (std::size_t r = 0; r < rounds; ++r)
      for (std::size_t q = r + 1; q < rounds; ++q)
        pair[f][r][q] = pair[f][q][r] = dtw(sequences[r][f], sequences[q][f]);

  best.meanNormalized.assign(rounds, 0.0);
  for (std::size_t f = 0; f < features; ++f) {
    std::vector<double> avg(rounds, 0.0);
    for (std::size_t r = 0; r < rounds; ++r) {
      for (std::size_t q = 0; q < rounds; ++q) avg[r] += pair[f][r][q];
      avg[r] /= static_cast<double>(rounds);
    }
    const double peak = *std::max_element(avg.begin(), avg.end());
    for (std::size_t r = 0; r < rounds; ++r)
      best.meanNormalized[r] += peak > 0.0 ? avg[r] / peak : 0.0;
  }
  for (auto& d : best.meanNormalized) d /= static_cast<double>(std::max<std::size_t>(features, 1));

  best.index = static_cast<std::size_t>(
      std::min_element(best.meanNormalized.begin(), best.meanNormalized.end()) - best.meanNormalized.begin());
  best.distances.resize(features);
  for (std::size_t f = 0; f < features; ++f) best.distances[f] = pair[f][best.index];
  return best;
}

std::vector<FiveStat> distance_stats(const BestRound& best) {
  std::vector<FiveStat> out;
  for (const auto& row : best.distances) {
    std::vector<double> others;
    for (std::size_t r = 0; r < row.size(); ++r)
      if (r != best.index) others.push_back(row[r]);
    out.push_back(five_stat(others));
  }
  return out;
}

std::vector<StrokeDtwTemplate> touch_dtw_template(std::span<const RoundFeatures> rounds) {
  std::vector<std::size_t> counts;
  for (const auto& r : rounds) counts.push_back(r.strokeSeries.size());
  require_equal_strokes(counts);

  std::vector<StrokeDtwTemplate> out;
  if (rounds.empty()) return out;
  for (std::size_t s = 0; s < counts.front(); ++s) {
    std::vector<std::vector<std::span<const double>>> seqs;
    for (const auto& r : rounds) {
      const auto& series = r.strokeSeries[s];
      seqs.push_back({series.x, series.y, series.t});
    }
    const auto best = select_best_round(seqs);
    const auto stats = distance_stats(best);
    StrokeDtwTemplate t;
    t.bestRound = best.index;
    std::copy(stats.begin(), stats.end(), t.distance.begin());
    out.push_back(t);
  }
  return out;
}

TouchGestureTemplate touch_gesture_template(std::span<const FeatureVector> roundRows) {
  TouchGestureTemplate t;
  if (roundRows.empty()) return t;
  double strokes = 0.0, pointers = 0.0;
  for (const auto& row : roundRows) {
    strokes += row[kStrokeCount];
    pointers += row[kMaxPointers];
  }
  const auto n = static_cast<double>(roundRows.size());
  t.strokeCount = static_cast<int>(std::floor(strokes / n));
  t.maxPointers = static_cast<int>(std::floor(pointers / n));

  std::vector<double> column(roundRows.size());
  for (auto feature : bounded_round_features()) {
    for (std::size_t r = 0; r < roundRows.size(); ++r) column[r] = roundRows[r][feature];
    t.bounded.push_back(five_stat(column));
  }
  return t;
}

std::vector<std::vector<FiveStat>> touch_stroke_template(std::span<const std::vector<FeatureVector>> strokeRows) {
  std::vector<std::size_t> counts;
  for (const auto& r : strokeRows) counts.push_back(r.size());
  require_equal_strokes(counts);

  std::vector<std::vector<FiveStat>> out;
  if (strokeRows.empty()) return out;
  for (std::size_t s = 0; s < counts.front(); ++s) {
    std::vector<FeatureVector> rows;
    for (const auto& r : strokeRows) rows.push_back(r[s]);
    out.push_back(column_stats(rows));
  }
  return out;
}

std::optional<std::vector<FiveStat>> feature_template(std::span<const std::optional<FeatureVector>> rows) {
  std::vector<FeatureVector> present;
  for (const auto& r : rows) {
    if (!r) return std::nullopt;
    present.push_back(*r);
  }
  if (present.empty()) return std::nullopt;
  return column_stats(present);
}

std::optional<FusionDtwTemplate> motion_dtw_template(std::span<const RoundFeatures> rounds) {
  if (rounds.size() < 2) return std::nullopt;
  std::vector<std::vector<std::span<const double>>> seqs;
  for (const auto& r : rounds) {
    if (!r.fusionSeries) return std::nullopt;
    std::vector<std::span<const double>> row;
    for (const auto& s : r.fusionSeries->angles) row.emplace_back(s);
    seqs.push_back(std::move(row));
  }
  const auto best = select_best_round(seqs);
  const auto stats = distance_stats(best);
  FusionDtwTemplate t;
  t.bestRound = best.index;
  std::copy(stats.begin(), stats.end(), t.distance.begin());
  return t;
}

GestureTemplate generate_template(const GestureMeta& meta,
                                  std::vector<RoundFeatures> rounds,
                                  std::size_t expectedRounds) {
  if (rounds.size() != expectedRounds) throw InsufficientRounds(expectedRounds, rounds.size());

  GestureTemplate t;
  t.meta = meta;
  t.rounds = std::move(rounds);
  t.touchDtw = touch_dtw_template(t.rounds);

  std::vector<FeatureVector> round_rows;
  std::vector<std::vector<FeatureVector>> stroke_rows;
  std::vector<std::optional<FeatureVector>> gyro, accel, fusion;
  for (const auto& r : t.rounds) {
    round_rows.push_back(r.touchRound);
    stroke_rows.push_back(r.strokes);
    gyro.push_back(r.gyro);
    accel.push_back(r.accel);
    fusion.push_back(r.fusion);
  }
  t.touchGesture = touch_gesture_template(round_rows);
  t.touchStroke = touch_stroke_template(stroke_rows);
  t.gyro = feature_template(gyro);
  t.accel = feature_template(accel);
  t.fusion = feature_template(fusion);
  t.fusionDtw = motion_dtw_template(t.rounds);
  return t;
}

}  // namespace smaug
