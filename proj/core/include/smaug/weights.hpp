#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smaug/stats.hpp"
#include "smaug/template.hpp"

namespace smaug {

enum class Comparison : std::uint8_t { LB, UB, EQ };

std::string_view to_string(Comparison c);
std::optional<Comparison> parse_comparison(std::string_view token);

/// Lower bound check: fails iff v < (am + min) / 2 - stdev.
bool lb_fails(double v, double am, double min, double stdev);
/// Upper bound check: fails iff v > (am + max) / 2 + stdev.
bool ub_fails(double v, double am, double max, double stdev);
/// Exact equality check for integer-valued structural features.
bool eq_fails(double v, double w);

bool lb_fails(double v, const FiveStat& t);
bool ub_fails(double v, const FiveStat& t);

/// Which of the seven checks produced a comparison. Stroke structure and
/// stroke DTW both belong to the stroke DTW check.
enum class CheckKind : std::uint8_t {
  Strong,
  TouchGesture,
  TouchStroke,
  StrokeStructure,
  StrokeDtw,
  MotionGyro,
  MotionAccel,
  MotionFusion,
  FusionDtw,
};

inline constexpr std::size_t kCheckKindCount = 9;

/// 1..7, the order in which the checks run.
int check_category(CheckKind kind);

std::string_view to_string(CheckKind kind);
std::optional<CheckKind> parse_check_kind(std::string_view token);

enum StrongFeature : std::size_t { kStrongStrokeCount, kStrongMaxPointers, kStrongFeatureCount };
enum StructureFeature : std::size_t { kStructurePointerId, kStructurePointerNumber, kStructureFeatureCount };

/// Number of features a check compares (per stroke for stroke-scoped checks).
std::size_t feature_count(CheckKind kind);
bool stroke_scoped(CheckKind kind);

/// "kind/feature", e.g. "stroke/x.am" or "gyro/o1.a2.kurt".
std::string feature_label(CheckKind kind, std::size_t feature);

/// A comparison feature, scoped to a stroke for stroke checks (stroke = -1
/// otherwise).
struct FeatureKey {
  CheckKind kind = CheckKind::Strong;
  std::uint16_t feature = 0;
  Comparison cmp = Comparison::EQ;
  int stroke = -1;

  friend auto operator<=>(const FeatureKey&, const FeatureKey&) = default;
};

struct FaultEntry {
  FeatureKey key;
  int round = 1;

  friend bool operator==(const FaultEntry&, const FaultEntry&) = default;
};

using FaultContainer = std::vector<FaultEntry>;

/// Orders faults by check category, round, stroke, feature, comparison.
void sort_faults(FaultContainer& faults);

/// Runs the seven checks of one round against the template, appending one
/// entry per failed comparison. Stroke checks cover the strokes the probe and
/// template have in common. Motion checks run only for tables present in the
/// template; a probe lacking that data fails every comparison of the table.
FaultContainer cross_validate(const RoundFeatures& round, int roundNumber, const GestureTemplate& tmpl);

/// Cross-validation of every retained enrollment round, sorted.
FaultContainer cross_validate_all(const GestureTemplate& tmpl);

// ---------------------------------------------------------------------------
// Tiers
// ---------------------------------------------------------------------------

enum class Tier : std::uint8_t { One = 1, Two = 2, Three = 3 };

struct TierValues {
  double one = 0.75;
  double two = 1.0;
  double three = 2.0;

  double value(Tier t) const;

  friend bool operator==(const TierValues&, const TierValues&) = default;
};

/// Assigns `tier` to every feature whose label starts with `prefix`. The
/// longest matching prefix wins; later rules win over earlier equal prefixes.
struct TierRule {
  std::string prefix;
  Tier tier = Tier::One;

  friend bool operator==(const TierRule&, const TierRule&) = default;
};

std::vector<TierRule> default_tier_rules();

Tier tier_of(std::string_view label, const std::vector<TierRule>& rules);

// ---------------------------------------------------------------------------
// Weights and indicators
// ---------------------------------------------------------------------------

/// Every comparison feature of a template, in key order.
std::vector<FeatureKey> build_catalog(const GestureTemplate& tmpl);

struct WeightSet {
  std::map<FeatureKey, double> weights;
  double faultIndicator = 0.0;   // I_F
  double weightIndicator = 0.0;  // I_W

  /// Weight of a fault; full tier weight for keys outside the catalog.
  double weight(const FeatureKey& key, double fallback) const;

  friend bool operator==(const WeightSet&, const WeightSet&) = default;
};

/// omega = T * (1 - faults / rounds) for every catalog entry.
std::map<FeatureKey, double> compute_weights(const FaultContainer& faults,
                                             const std::vector<FeatureKey>& catalog,
                                             const std::vector<TierRule>& rules,
                                             const TierValues& tiers,
                                             int rounds);

struct RoundIndicators {
  std::vector<double> faults;    // I_F[r]
  std::vector<double> weighted;  // I_W[r]
};

/// Per-round fault counts and weighted fault sums for rounds 1..rounds.
RoundIndicators round_indicators(const FaultContainer& faults,
                                 const std::map<FeatureKey, double>& weights,
                                 int rounds);

/// AM + StDev of a per-round indicator vector.
double combine_indicator(const std::vector<double>& perRound);

/// Weights plus I_F, I_W from the enrollment fault container.
WeightSet compute_weight_set(const FaultContainer& faults,
                             const std::vector<FeatureKey>& catalog,
                             const std::vector<TierRule>& rules,
                             const TierValues& tiers,
                             int rounds);

// ---------------------------------------------------------------------------
// Thresholds
// ---------------------------------------------------------------------------

struct SecurityParams {
  double weightMul = 3.0;   // P_W*
  double weightAdd = 7.0;   // P_W+
  double faultMul = 2.1;    // P_F*
  double faultAdd = 7.0;    // P_F+

  friend bool operator==(const SecurityParams&, const SecurityParams&) = default;
};

struct SecurityTable {
  SecurityParams bgSingle{2.5, 6.0, 1.9, 6.0};
  SecurityParams bgMulti{2.2, 4.0, 2.1, 4.0};
  SecurityParams plainSingle{3.0, 7.0, 2.1, 7.0};
  SecurityParams plainMulti{2.5, 8.0, 2.5, 8.0};

  const SecurityParams& select(bool backgroundImage, bool multiTouch) const;

  friend bool operator==(const SecurityTable&, const SecurityTable&) = default;
};

struct Thresholds {
  double weight = 0.0;  // Theta_1
  double fault = 0.0;   // Theta_2
  SecurityParams params;

  friend bool operator==(const Thresholds&, const Thresholds&) = default;
};

Thresholds compute_thresholds(double weightIndicator, double faultIndicator, int strokes, const SecurityParams& params);

/// Accept iff weighted <= Theta_1 and faults <= Theta_2.
bool decide(double weighted, double faults, const Thresholds& th);

}  // namespace smaug
