#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "smaug/features.hpp"
#include "smaug/stats.hpp"

namespace smaug {

/// Sequences compared by DTW per stroke: x, y and time since first touch.
enum TouchDtwFeature : std::size_t { kDtwX, kDtwY, kDtwTime, kTouchDtwFeatureCount };

std::span<const std::string> touch_dtw_feature_names();

/// Result of best-round selection over a set of rounds.
struct BestRound {
  std::size_t index = 0;  // position of r* in the round list
  // distances[feature][r] = DTW(sequence_{r*}, sequence_r); zero at r*.
  std::vector<std::vector<double>> distances;
  std::vector<double> meanNormalized;  // d-bar per round
};

/// `sequences[r][f]` is feature f of round r. Computes all pairwise DTW
/// distances, per-round averages (self-distance included, divided by the
/// round count), normalizes each feature by its largest average (0 when that
/// maximum is 0), averages over features, and picks the arg-min round (lowest
/// index on ties).
BestRound select_best_round(const std::vector<std::vector<std::span<const double>>>& sequences);

/// FiveStat of distances from r* to every other round.
std::vector<FiveStat> distance_stats(const BestRound& best);

struct StrokeDtwTemplate {
  std::size_t bestRound = 0;
  std::array<FiveStat, kTouchDtwFeatureCount> distance;

  friend bool operator==(const StrokeDtwTemplate&, const StrokeDtwTemplate&) = default;
};

struct TouchGestureTemplate {
  int strokeCount = 0;
  int maxPointers = 0;
  std::vector<FiveStat> bounded;  // aligned with bounded_round_features()

  friend bool operator==(const TouchGestureTemplate&, const TouchGestureTemplate&) = default;
};

struct FusionDtwTemplate {
  std::size_t bestRound = 0;
  std::array<FiveStat, kFusionSequenceCount> distance;

  friend bool operator==(const FusionDtwTemplate&, const FusionDtwTemplate&) = default;
};

/// Stored per-gesture template: the retained rounds plus the six template
/// tables. Motion tables are absent when any round lacks that motion data.
struct GestureTemplate {
  GestureMeta meta;
  std::vector<RoundFeatures> rounds;
  std::vector<StrokeDtwTemplate> touchDtw;         // T4, per stroke
  TouchGestureTemplate touchGesture;               // T5
  std::vector<std::vector<FiveStat>> touchStroke;  // T6, [stroke][feature]
  std::optional<std::vector<FiveStat>> gyro;       // G3
  std::optional<std::vector<FiveStat>> accel;      // A3
  std::optional<std::vector<FiveStat>> fusion;     // F3
  std::optional<FusionDtwTemplate> fusionDtw;      // F4

  int stroke_count() const { return touchGesture.strokeCount; }
  bool multi_touch() const { return touchGesture.maxPointers > 1; }

  friend bool operator==(const GestureTemplate&, const GestureTemplate&) = default;
};

/// T4. Throws StrokeCountMismatch if the rounds disagree on stroke count.
std::vector<StrokeDtwTemplate> touch_dtw_template(std::span<const RoundFeatures> rounds);

/// T5 from the per-round touch round rows.
TouchGestureTemplate touch_gesture_template(std::span<const FeatureVector> roundRows);

/// T6 from per-round stroke rows. Throws StrokeCountMismatch.
std::vector<std::vector<FiveStat>> touch_stroke_template(std::span<const std::vector<FeatureVector>> strokeRows);

/// FiveStat per feature over rounds (G3, A3, F3). Absent if any round is.
std::optional<std::vector<FiveStat>> feature_template(std::span<const std::optional<FeatureVector>> rows);

/// F4. Absent unless at least two rounds exist and every round has fusion data.
std::optional<FusionDtwTemplate> motion_dtw_template(std::span<const RoundFeatures> rounds);

/// Assembles the full template. Throws InsufficientRounds when the round
/// count differs from `expectedRounds`, StrokeCountMismatch naming the first
/// round that deviates from the majority stroke count.
GestureTemplate generate_template(const GestureMeta& meta,
                                  std::vector<RoundFeatures> rounds,
                                  std::size_t expectedRounds);

}  // namespace smaug
