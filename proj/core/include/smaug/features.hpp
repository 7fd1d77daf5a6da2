#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smaug/preprocess.hpp"
#include "smaug/stats.hpp"

namespace smaug {

using FeatureVector = std::vector<double>;

// ---------------------------------------------------------------------------
// Touch event features
// ---------------------------------------------------------------------------

/// Per-event sequences of one stroke. `t` is relative to the round's first
/// touch (ns). Index conventions for an n-event stroke (no duplicate
/// timestamps): velocity n-1 values, acceleration n-2, curvature n-2 (interior
/// points), direction n-1 (segments). Events sharing a timestamp with their
/// predecessor contribute positions but no difference quotients.
struct StrokeSeries {
  std::vector<double> x, y, t, pressure, size;
  std::vector<double> curvature, direction, vx, vy, ax, ay;

  friend bool operator==(const StrokeSeries&, const StrokeSeries&) = default;
};

StrokeSeries touch_event_features(std::span<const TouchEvent> stroke, std::int64_t originNs);

// ---------------------------------------------------------------------------
// Touch round features (one row per round)
// ---------------------------------------------------------------------------

enum RoundFeature : std::size_t {
  kRecords,
  kFrequency,
  kMaxPointers,
  kOverallLengthPx,
  kOverallTimeNs,
  kStrokeCount,
  kBoxCenterX,
  kBoxCenterY,
  kBoxWidth,
  kBoxHeight,
  kRoundFeatureCount
};

std::span<const std::string> round_feature_names();

/// The seven round features checked by bounds (frequency and the two strong
/// features are excluded).
std::span<const RoundFeature> bounded_round_features();

/// Largest number of pointers down at the same time.
int max_simultaneous_pointers(const StrokedTouchSet& touch);

FeatureVector touch_round_features(const StrokedTouchSet& touch);

// ---------------------------------------------------------------------------
// Touch stroke features (one row per stroke)
// ---------------------------------------------------------------------------

enum class StrokeSequence : std::size_t { X, Y, Pressure, Size, Curvature, Direction, VelX, VelY, AccX, AccY };
inline constexpr std::size_t kStrokeSequenceCount = 10;

enum class Stat : std::size_t { Min, Max, Am, Rms, Var, Stdev, Mad, Skew, Kurt };
inline constexpr std::size_t kStatCount = 9;

enum StrokeScalar : std::size_t {
  kLengthNs,
  kLengthPx,
  kStartX,
  kStartY,
  kEndX,
  kEndY,
  kStartTimeNs,
  kEndTimeNs,
  kSumLenX,
  kSumLenY,
  kStrokeBoxWidth,
  kStrokeBoxHeight,
  kStrokeBoxCenterX,
  kStrokeBoxCenterY,
  kPctLengthPx,
  kPctLengthNs,
  kStrokeScalarCount
};

inline constexpr std::size_t kStrokeFeatureCount = kStrokeSequenceCount * kStatCount + kStrokeScalarCount;

constexpr std::size_t stroke_feature_index(StrokeSequence seq, Stat stat) {
  return static_cast<std::size_t>(seq) * kStatCount + static_cast<std::size_t>(stat);
}
constexpr std::size_t stroke_feature_index(StrokeScalar scalar) {
  return kStrokeSequenceCount * kStatCount + scalar;
}

std::span<const std::string> stroke_feature_names();

/// One 106-value row per stroke; percentages relate to the round totals in
/// `round` (a touch_round_features row).
std::vector<FeatureVector> touch_stroke_features(const StrokedTouchSet& touch,
                                                 std::span<const StrokeSeries> series,
                                                 const FeatureVector& round);

// ---------------------------------------------------------------------------
// Motion features
// ---------------------------------------------------------------------------

/// Axis values and their first/second difference quotients (per second).
/// `values[order][axis]`, `times[order]`.
struct DifferentiatedSeries {
  std::array<std::array<std::vector<double>, 3>, 3> values;
  std::array<std::vector<std::int64_t>, 3> times;

  friend bool operator==(const DifferentiatedSeries&, const DifferentiatedSeries&) = default;
};

DifferentiatedSeries differentiate(std::span<const std::int64_t> times,
                                   const std::array<std::vector<double>, 3>& axes);

DifferentiatedSeries motion_event_features(std::span<const MotionEvent> events);

inline constexpr std::size_t kMotionFeatureCount = 90;

std::span<const std::string> motion_feature_names();

/// Seven moments per axis and order (63), then per order: three axis-pair
/// correlations, 1-/inf-/Frobenius norms, and min/max/mean of the per-row
/// squared l2 norms (27).
FeatureVector motion_round_features(const DifferentiatedSeries& series);

struct MatrixNorms {
  double one = 0, inf = 0, frobenius = 0;
  std::vector<double> rowSquaredL2;
};

/// Norms of the |rows| x 3 matrix whose columns are the given axes.
MatrixNorms matrix_norms(const std::array<std::vector<double>, 3>& columns);

// ---------------------------------------------------------------------------
// Motion fusion features
// ---------------------------------------------------------------------------

enum FusionSequence : std::size_t { kAngle0, kAngleRate0, kAngle1, kAngleRate1, kAngle2, kAngleRate2, kFusionSequenceCount };

std::span<const std::string> fusion_sequence_names();

/// Angle in [0, pi] between two vectors; 0 if either has norm below 1e-12.
double vector_angle(const Vec3& a, const Vec3& b);

struct FusionSeries {
  DifferentiatedSeries gyro;
  DifferentiatedSeries accel;
  std::array<std::vector<double>, kFusionSequenceCount> angles;

  friend bool operator==(const FusionSeries&, const FusionSeries&) = default;
};

FusionSeries motion_fusion_series(std::span<const FusionEvent> fusion);

inline constexpr std::size_t kFusionFeatureCount = 9;

std::span<const std::string> fusion_feature_names();

/// PCC between gyro axis i and accelerometer axis j, row-major over (i, j).
FeatureVector fusion_correlations(std::span<const FusionEvent> fusion);

// ---------------------------------------------------------------------------
// Whole-round extraction
// ---------------------------------------------------------------------------

/// Fewer fused events leave some angle-rate sequences empty; such rounds are
/// treated as having no fusion data.
inline constexpr std::size_t kMinFusionEvents = 4;

struct RoundFeatures {
  ProcessedRound round;
  std::vector<StrokeSeries> strokeSeries;
  FeatureVector touchRound;
  std::vector<FeatureVector> strokes;
  std::optional<FeatureVector> gyro;
  std::optional<FeatureVector> accel;
  std::optional<FusionSeries> fusionSeries;
  std::optional<FeatureVector> fusion;

  int stroke_count() const { return static_cast<int>(strokes.size()); }

  friend bool operator==(const RoundFeatures&, const RoundFeatures&) = default;
};

/// Event sequences of every stroke, times relative to the first touch.
std::vector<StrokeSeries> stroke_series(const StrokedTouchSet& touch);

RoundFeatures extract_features(ProcessedRound round);

/// Structural identity of a stroke: its pointer id and the pointer number of
/// its down event.
struct StrokeStructure {
  int pointerId = 0;
  int pointerNumber = 0;
};

StrokeStructure stroke_structure(const StrokedTouchSet& touch, std::size_t stroke);

}  // namespace smaug
