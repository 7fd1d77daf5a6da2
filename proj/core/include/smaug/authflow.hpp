#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "smaug/config.hpp"
#include "smaug/template.hpp"
#include "smaug/weights.hpp"

namespace smaug {

/// Everything stored for one enrolled gesture.
struct EnrollmentRecord {
  std::string user;
  std::int64_t createdAt = 0;  // seconds since the Unix epoch
  GestureTemplate tmpl;
  PreprocessParams preprocess;
  int extraAttempts = 2;
  TierValues tiers;
  std::vector<TierRule> tierRules;
  WeightSet weights;
  Thresholds thresholds;

  const std::string& gesture_id() const { return tmpl.meta.gestureId; }

  friend bool operator==(const EnrollmentRecord&, const EnrollmentRecord&) = default;
};

/// Preprocesses and extracts features for every round, builds the template,
/// cross-validates the rounds against it and derives weights and thresholds.
/// Round numbers are assigned by position. Throws InsufficientRounds,
/// StrokeCountMismatch, EmptyTouch and trace-level errors.
EnrollmentRecord enroll(const std::string& user,
                        const GestureMeta& meta,
                        std::span<const GestureTrace> traces,
                        const SystemConfig& config,
                        std::int64_t createdAt = 0);

struct AttemptResult {
  bool decision = false;
  double weighted = 0.0;  // I~_W
  double faults = 0.0;    // I~_F
  Thresholds thresholds;
  FaultContainer detail;
};

/// One verification attempt. Mismatches never throw; only unusable probes
/// (no touch, broken strokes) do.
AttemptResult verify_attempt(const GestureTrace& probe, const EnrollmentRecord& record);

/// Indicators of an already extracted probe.
AttemptResult verify_features(const RoundFeatures& probe, const EnrollmentRecord& record);

struct VerificationOutcome {
  bool decision = false;
  int attemptsUsed = 0;
  bool fallbackRequired = false;
  std::vector<AttemptResult> attempts;
};

/// Supplies the trace of attempt t (1-based), or nothing when the user gives up.
using AttemptSource = std::function<std::optional<GestureTrace>(int attempt)>;

/// Up to extraAttempts + 1 attempts, stopping at the first success. When all
/// attempts fail `onFallback` is invoked (if set) and the outcome is marked.
VerificationOutcome verify_session(const EnrollmentRecord& record,
                                   const AttemptSource& source,
                                   int extraAttempts,
                                   const std::function<void(const VerificationOutcome&)>& onFallback = {});

struct GestureChoice {
  std::string gestureId;
  std::optional<std::string> displayName;  // withheld in secret mode
};

/// Uniform choice over the registered gestures. Throws EmptyRegistry.
GestureChoice select_gesture(std::span<const GestureMeta> registry, std::mt19937_64& rng);

}  // namespace smaug
