#include "smaug/weights.hpp"

#include <algorithm>
#include <array>
#include <tuple>

#include "smaug/dtw.hpp"

namespace smaug {

namespace {

constexpr std::array<std::string_view, kCheckKindCount> kKindNames = {
    "strong", "gesture", "stroke", "structure", "strokeDtw", "gyro", "accel", "fusion", "fusionDtw"};

constexpr std::array<std::string_view, kStrongFeatureCount> kStrongNames = {"strokeCount", "maxPointers"};
constexpr std::array<std::string_view, kStructureFeatureCount> kStructureNames = {"pointerId", "pointerNumber"};

class Collector {
 public:
  Collector(FaultContainer& out, int round) : out_(out), round_(round) {}

  void add(CheckKind kind, std::size_t feature, Comparison cmp, int stroke = -1) {
    out_.push_back({{kind, static_cast<std::uint16_t>(feature), cmp, stroke}, round_});
  }

  void bounds(CheckKind kind, std::size_t feature, double v, const FiveStat& t, int stroke = -1) {
    if (lb_fails(v, t)) add(kind, feature, Comparison::LB, stroke);
    if (ub_fails(v, t)) add(kind, feature, Comparison::UB, stroke);
  }

  // A probe without data for a present template table fails both bounds.
  void table(CheckKind kind, const std::optional<FeatureVector>& probe, const std::optional<std::vector<FiveStat>>& tmpl) {
    if (!tmpl) return;
    for (std::size_t f = 0; f < tmpl->size(); ++f) {
      if (probe) {
        bounds(kind, f, (*probe)[f], (*tmpl)[f]);
      } else {
        add(kind, f, Comparison::LB);
        add(kind, f, Comparison::UB);
      }
    }
  }

 private:
  FaultContainer& out_;
  int round_;
};

std::span<const double> touch_dtw_sequence(const StrokeSeries& s, std::size_t feature) {
  switch (feature) {
    case kDtwX: return s.x;
    case kDtwY: return s.y;
    default: return s.t;
  }
}

}  // namespace

std::string_view to_string(Comparison c) {
  switch (c) {
    case Comparison::LB: return "LB";
    case Comparison::UB: return "UB";
    case Comparison::EQ: return "EQ";
  }
  return "?";
}

std::optional<Comparison> parse_comparison(std::string_view token) {
  if (token == "LB") return Comparison::LB;
  if (token == "UB") return Comparison::UB;
  if (token == "EQ") return Comparison::EQ;
  return std::nullopt;
}

bool lb_fails(double v, double am, double min, double stdev) { return v < 0.5 * (am + min) - stdev; }
bool ub_fails(double v, double am, double max, double stdev) { return v > 0.5 * (am + max) + stdev; }
bool eq_fails(double v, double w) { return v != w; }

bool lb_fails(double v, const FiveStat& t) { return lb_fails(v, t.am, t.min, t.stdev); }
bool ub_fails(double v, const FiveStat& t) { return ub_fails(v, t.am, t.max, t.stdev); }

int check_category(CheckKind kind) {
  switch (kind) {
    case CheckKind::Strong: return 1;
    case CheckKind::TouchGesture: return 2;
    case CheckKind::TouchStroke: return 3;
    case CheckKind::StrokeStructure:
    case CheckKind::StrokeDtw: return 4;
    case CheckKind::MotionGyro:
    case CheckKind::MotionAccel: return 5;
    case CheckKind::MotionFusion: return 6;
    case CheckKind::FusionDtw: return 7;
  }
  return 0;
}

std::string_view to_string(CheckKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

std::optional<CheckKind> parse_check_kind(std::string_view token) {
  for (std::size_t k = 0; k < kKindNames.size(); ++k)
    if (kKindNames[k] == token) return static_cast<CheckKind>(k);
  return std::nullopt;
}

std::size_t feature_count(CheckKind kind) {
  switch (kind) {
    case CheckKind::Strong: return kStrongFeatureCount;
    case CheckKind::TouchGesture: return bounded_round_features().size();
    case CheckKind::TouchStroke: return kStrokeFeatureCount;
    case CheckKind::StrokeStructure: return kStructureFeatureCount;
    case CheckKind::StrokeDtw: return kTouchDtwFeatureCount;
    case CheckKind::MotionGyro:
    case CheckKind::MotionAccel: return kMotionFeatureCount;
    case CheckKind::MotionFusion: return kFusionFeatureCount;
    case CheckKind::FusionDtw: return kFusionSequenceCount;
  }
  return 0;
}

bool stroke_scoped(CheckKind kind) {
  return kind == CheckKind::TouchStroke || kind == CheckKind::StrokeStructure || kind == CheckKind::StrokeDtw;
}

std::string feature_label(CheckKind kind, std::size_t feature) {
  std::string label(to_string(kind));
  label += '/';
  switch (kind) {
    case CheckKind::Strong: label += kStrongNames.at(feature); break;
    case CheckKind::TouchGesture: label += round_feature_names()[bounded_round_features()[feature]]; break;
    case CheckKind::TouchStroke: label += stroke_feature_names()[feature]; break;
    case CheckKind::StrokeStructure: label += kStructureNames.at(feature); break;
    case CheckKind::StrokeDtw: label += touch_dtw_feature_names()[feature]; break;
    case CheckKind::MotionGyro:
    case CheckKind::MotionAccel: label += motion_feature_names()[feature]; break;
    case CheckKind::MotionFusion: label += fusion_feature_names()[feature]; break;
    case CheckKind::FusionDtw: label += fusion_sequence_names()[feature]; break;
  }
  return label;
}

void sort_faults(FaultContainer& faults) {
  std::stable_sort(faults.begin(), faults.end(), [](const FaultEntry& a, const FaultEntry& b) {
    return std::tuple(check_category(a.key.kind), a.round, a.key.stroke, a.key.kind, a.key.feature, a.key.cmp) <
           std::tuple(check_category(b.key.kind), b.round, b.key.stroke, b.key.kind, b.key.feature, b.key.cmp);
  });
}

FaultContainer cross_validate(const RoundFeatures& round, int roundNumber, const GestureTemplate& tmpl) {
  FaultContainer out;
  Collector c(out, roundNumber);

  // 1. strong features
  if (eq_fails(round.touchRound[kStrokeCount], tmpl.touchGesture.strokeCount))
    c.add(CheckKind::Strong, kStrongStrokeCount, Comparison::EQ);
  if (eq_fails(round.touchRound[kMaxPointers], tmpl.touchGesture.maxPointers))
    c.add(CheckKind::Strong, kStrongMaxPointers, Comparison::EQ);

  // 2. touch gesture
  const auto bounded = bounded_round_features();
  for (std::size_t i = 0; i < bounded.size() && i < tmpl.touchGesture.bounded.size(); ++i)
    c.bounds(CheckKind::TouchGesture, i, round.touchRound[bounded[i]], tmpl.touchGesture.bounded[i]);

  const std::size_t strokes = std::min(round.strokes.size(), tmpl.touchStroke.size());

  // 3. touch stroke
  for (std::size_t s = 0; s < strokes; ++s)
    for (std::size_t f = 0; f < kStrokeFeatureCount; ++f)
      c.bounds(CheckKind::TouchStroke, f, round.strokes[s][f], tmpl.touchStroke[s][f], static_cast<int>(s));

  // 4. stroke structure and DTW against the best round of each stroke
  for (std::size_t s = 0; s < strokes && s < tmpl.touchDtw.size(); ++s) {
    const auto& dt = tmpl.touchDtw[s];
    const auto& best = tmpl.rounds[dt.bestRound];
    const auto stroke = static_cast<int>(s);
    const auto mine = stroke_structure(round.round.touch, s);
    const auto ref = stroke_structure(best.round.touch, s);
    if (eq_fails(mine.pointerId, ref.pointerId))
      c.add(CheckKind::StrokeStructure, kStructurePointerId, Comparison::EQ, stroke);
    if (eq_fails(mine.pointerNumber, ref.pointerNumber))
      c.add(CheckKind::StrokeStructure, kStructurePointerNumber, Comparison::EQ, stroke);
    for (std::size_t f = 0; f < kTouchDtwFeatureCount; ++f) {
      const double d = dtw(touch_dtw_sequence(best.strokeSeries[s], f), touch_dtw_sequence(round.strokeSeries[s], f));
      if (ub_fails(d, dt.distance[f])) c.add(CheckKind::StrokeDtw, f, Comparison::UB, stroke);
    }
  }

  // 5. motion gesture, 6. motion fusion
  c.table(CheckKind::MotionGyro, round.gyro, tmpl.gyro);
  c.table(CheckKind::MotionAccel, round.accel, tmpl.accel);
  c.table(CheckKind::MotionFusion, round.fusion, tmpl.fusion);

  // 7. motion fusion DTW
  if (tmpl.fusionDtw) {
    const auto& best = *tmpl.rounds[tmpl.fusionDtw->bestRound].fusionSeries;
    for (std::size_t f = 0; f < kFusionSequenceCount; ++f) {
      if (!round.fusionSeries) {
        c.add(CheckKind::FusionDtw, f, Comparison::UB);
        continue;
      }
      const double d = dtw(best.angles[f], round.fusionSeries->angles[f]);
      if (ub_fails(d, tmpl.fusionDtw->distance[f])) c.add(CheckKind::FusionDtw, f, Comparison::UB);
    }
  }
  return out;
}

FaultContainer cross_validate_all(const GestureTemplate& tmpl) {
  FaultContainer all;
  for (std::size_t r = 0; r < tmpl.rounds.size(); ++r) {
    auto part = cross_validate(tmpl.rounds[r], static_cast<int>(r + 1), tmpl);
    all.insert(all.end(), part.begin(), part.end());
  }
  sort_faults(all);
  return all;
}

double TierValues::value(Tier t) const {
  switch (t) {
    case Tier::One: return one;
    case Tier::Two: return two;
    case Tier::Three: return three;
  }
  return one;
}

std::vector<TierRule> default_tier_rules() {
  return {
      {"", Tier::One},
      {"strong/", Tier::Three},
      {"gesture/", Tier::Three},
      {"structure/", Tier::Three},
      {"strokeDtw/", Tier::Three},
      {"stroke/", Tier::Two},
      {"stroke/C.", Tier::One},
      {"stroke/D.", Tier::One},
      {"stroke/VX.", Tier::One},
      {"stroke/VY.", Tier::One},
      {"stroke/AX.", Tier::One},
      {"stroke/AY.", Tier::One},
      {"fusionDtw/", Tier::Two},
  };
}

Tier tier_of(std::string_view label, const std::vector<TierRule>& rules) {
  Tier tier = Tier::One;
  std::size_t longest = 0;
  bool matched = false;
  for (const auto& rule : rules) {
    if (!label.starts_with(rule.prefix)) continue;
    if (!matched || rule.prefix.size() >= longest) {
      tier = rule.tier;
      longest = rule.prefix.size();
      matched = true;
    }
  }
  return tier;
}

std::vector<FeatureKey> build_catalog(const GestureTemplate& tmpl) {
  std::vector<FeatureKey> out;
  auto both = [&](CheckKind kind, std::size_t f, int stroke) {
    out.push_back({kind, static_cast<std::uint16_t>(f), Comparison::LB, stroke});
    out.push_back({kind, static_cast<std::uint16_t>(f), Comparison::UB, stroke});
  };
  for (std::size_t f = 0; f < kStrongFeatureCount; ++f)
    out.push_back({CheckKind::Strong, static_cast<std::uint16_t>(f), Comparison::EQ});
  for (std::size_t f = 0; f < tmpl.touchGesture.bounded.size(); ++f) both(CheckKind::TouchGesture, f, -1);
  for (std::size_t s = 0; s < tmpl.touchStroke.size(); ++s) {
    const auto stroke = static_cast<int>(s);
    for (std::size_t f = 0; f < kStrokeFeatureCount; ++f) both(CheckKind::TouchStroke, f, stroke);
    for (std::size_t f = 0; f < kStructureFeatureCount; ++f)
      out.push_back({CheckKind::StrokeStructure, static_cast<std::uint16_t>(f), Comparison::EQ, stroke});
    for (std::size_t f = 0; f < kTouchDtwFeatureCount; ++f)
      out.push_back({CheckKind::StrokeDtw, static_cast<std::uint16_t>(f), Comparison::UB, stroke});
  }
  if (tmpl.gyro)
    for (std::size_t f = 0; f < tmpl.gyro->size(); ++f) both(CheckKind::MotionGyro, f, -1);
  if (tmpl.accel)
    for (std::size_t f = 0; f < tmpl.accel->size(); ++f) both(CheckKind::MotionAccel, f, -1);
  if (tmpl.fusion)
    for (std::size_t f = 0; f < tmpl.fusion->size(); ++f) both(CheckKind::MotionFusion, f, -1);
  if (tmpl.fusionDtw)
    for (std::size_t f = 0; f < kFusionSequenceCount; ++f)
      out.push_back({CheckKind::FusionDtw, static_cast<std::uint16_t>(f), Comparison::UB});
  std::sort(out.begin(), out.end());
  return out;
}

double WeightSet::weight(const FeatureKey& key, double fallback) const {
  const auto it = weights.find(key);
  return it == weights.end() ? fallback : it->second;
}

std::map<FeatureKey, double> compute_weights(const FaultContainer& faults,
                                             const std::vector<FeatureKey>& catalog,
                                             const std::vector<TierRule>& rules,
                                             const TierValues& tiers,
                                             int rounds) {
  std::map<FeatureKey, int> counts;
  for (const auto& f : faults) ++counts[f.key];
  std::map<FeatureKey, double> out;
  for (const auto& key : catalog) {
    const double t = tiers.value(tier_of(feature_label(key.kind, key.feature), rules));
    const auto it = counts.find(key);
    const int k = it == counts.end() ? 0 : it->second;
    const double share = rounds > 0 ? static_cast<double>(std::min(k, rounds)) / rounds : 0.0;
    out[key] = t * (1.0 - share);
  }
  return out;
}

RoundIndicators round_indicators(const FaultContainer& faults,
                                 const std::map<FeatureKey, double>& weights,
                                 int rounds) {
  RoundIndicators out;
  out.faults.assign(static_cast<std::size_t>(std::max(rounds, 0)), 0.0);
  out.weighted.assign(out.faults.size(), 0.0);
  for (const auto& f : faults) {
    if (f.round < 1 || f.round > rounds) continue;
    const auto r = static_cast<std::size_t>(f.round - 1);
    out.faults[r] += 1.0;
    const auto it = weights.find(f.key);
    if (it != weights.end()) out.weighted[r] += it->second;
  }
  return out;
}

double combine_indicator(const std::vector<double>& perRound) {
  return arithmetic_mean(perRound) + standard_deviation(perRound);
}

WeightSet compute_weight_set(const FaultContainer& faults,
                             const std::vector<FeatureKey>& catalog,
                             const std::vector<TierRule>& rules,
                             const TierValues& tiers,
                             int rounds) {
  WeightSet w;
  w.weights = compute_weights(faults, catalog, rules, tiers, rounds);
  const auto ind = round_indicators(faults, w.weights, rounds);
  w.faultIndicator = combine_indicator(ind.faults);
  w.weightIndicator = combine_indicator(ind.weighted);
  return w;
}

const SecurityParams& SecurityTable::select(bool backgroundImage, bool multiTouch) const {
  if (backgroundImage) return multiTouch ? bgMulti : bgSingle;
  return multiTouch ? plainMulti : plainSingle;
}

Thresholds compute_thresholds(double weightIndicator, double faultIndicator, int strokes, const SecurityParams& params) {
  Thresholds th;
  th.params = params;
  th.weight = weightIndicator * params.weightMul + params.weightAdd * (1.0 + strokes);
  th.fault = faultIndicator * params.faultMul + params.faultAdd * (1.0 + strokes);
  return th;
}

bool decide(double weighted, double faults, const Thresholds& th) { return weighted <= th.weight && faults <= th.fault; }

}  // namespace smaug
