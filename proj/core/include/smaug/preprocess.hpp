#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "smaug/trace.hpp"

namespace smaug {

/// Touch events of one pointer from its down event through its up event.
struct Stroke {
  int index = 0;  // order of the stroke's down event
  int pointerId = 0;
  std::vector<std::size_t> events;  // indices into StrokedTouchSet::events

  friend bool operator==(const Stroke&, const Stroke&) = default;
};

struct TimeSpan {
  std::int64_t startNs = 0;
  std::int64_t endNs = 0;

  friend bool operator==(const TimeSpan&, const TimeSpan&) = default;
};

struct StrokedTouchSet {
  std::vector<TouchEvent> events;  // corrected, time ordered
  std::vector<Stroke> strokes;     // ordered by Stroke::index
  std::vector<TimeSpan> gaps;      // intervals with no active pointer

  friend bool operator==(const StrokedTouchSet&, const StrokedTouchSet&) = default;
};

/// Synchronized gyroscope/accelerometer pair; timestamp taken from the gyro.
struct FusionEvent {
  std::int64_t timeNs = 0;
  Vec3 gyro{};
  Vec3 accel{};

  friend bool operator==(const FusionEvent&, const FusionEvent&) = default;
};

struct PreprocessParams {
  double offsetStartMs = 150.0;
  double offsetEndMs = 100.0;
  double fusionWindowMs = 10.0;

  friend bool operator==(const PreprocessParams&, const PreprocessParams&) = default;
};

/// Splits a time-ordered touch stream into measurement event sets: a set is a
/// run of events inside one millisecond bucket whose pointer numbers count
/// up from 0. Returns the start index of every set.
std::vector<std::size_t> event_set_starts(std::span<const TouchEvent> events);

/// Rewrites spurious POINTER_UP actions: a pointer reported as going up that
/// keeps producing non-down events afterwards is only moving. Throws
/// InconsistentStream when the corrected stream still has a pointer acting
/// while inactive.
std::vector<TouchEvent> correct_touch_actions(std::span<const TouchEvent> events);

/// Pairs down/up events per pointer into strokes. Throws UnterminatedStroke
/// or InconsistentStream.
StrokedTouchSet determine_strokes(std::vector<TouchEvent> corrected);

/// Keeps motion events inside the closed window
/// [firstTouchNs - offsetStartMs, lastTouchNs + offsetEndMs].
std::vector<MotionEvent> snuggle_motion(std::span<const MotionEvent> motion,
                                        std::int64_t firstTouchNs,
                                        std::int64_t lastTouchNs,
                                        double offsetStartMs,
                                        double offsetEndMs);

/// Greedy forward matching of each gyro sample to the nearest unmatched
/// accelerometer sample within `windowMs`. Throws EmptyFusion when no pair
/// results.
std::vector<FusionEvent> fuse_motion(std::span<const MotionEvent> gyro,
                                     std::span<const MotionEvent> accel,
                                     double windowMs = 10.0);

/// Post-processed round (T1, G1, A1, F1). `fusion` is empty when the motion
/// capture was unusable.
struct ProcessedRound {
  GestureMeta meta;
  StrokedTouchSet touch;
  std::vector<MotionEvent> gyro;
  std::vector<MotionEvent> accel;
  std::vector<FusionEvent> fusion;

  friend bool operator==(const ProcessedRound&, const ProcessedRound&) = default;
};

/// Full post-processing of one raw round. Throws EmptyTouch for a trace
/// without touch events.
ProcessedRound preprocess(const GestureTrace& trace, const PreprocessParams& params = {});

}  // namespace smaug
