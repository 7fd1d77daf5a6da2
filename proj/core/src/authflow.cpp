#include "smaug/authflow.hpp"

#include "smaug/errors.hpp"

namespace smaug {

EnrollmentRecord enroll(const std::string& user,
                        const GestureMeta& meta,
                        std::span<const GestureTrace> traces,
                        const SystemConfig& config,
                        std::int64_t createdAt) {
  const auto expected = static_cast<std::size_t>(config.enrollRounds);
  if (traces.size() != expected) throw InsufficientRounds(expected, traces.size());

  std::vector<RoundFeatures> rounds;
  rounds.reserve(traces.size());
  for (std::size_t r = 0; r < traces.size(); ++r) {
    auto processed = preprocess(traces[r], config.preprocess);
    processed.meta.round = static_cast<int>(r + 1);
    rounds.push_back(extract_features(std::move(processed)));
  }

  EnrollmentRecord rec;
  rec.user = user;
  rec.createdAt = createdAt;
  rec.preprocess = config.preprocess;
  rec.extraAttempts = config.extraAttempts;
  rec.tiers = config.tiers;
  rec.tierRules = config.tierRules;
  rec.tmpl = generate_template(meta, std::move(rounds), expected);

  const auto faults = cross_validate_all(rec.tmpl);
  rec.weights = compute_weight_set(faults, build_catalog(rec.tmpl), rec.tierRules, rec.tiers, config.enrollRounds);
  const auto& params = config.security.select(meta.backgroundImageMode, rec.tmpl.multi_touch());
  rec.thresholds = compute_thresholds(rec.weights.weightIndicator, rec.weights.faultIndicator,
                                      rec.tmpl.stroke_count(), params);
  return rec;
}

AttemptResult verify_features(const RoundFeatures& probe, const EnrollmentRecord& record) {
  AttemptResult out;
  out.detail = cross_validate(probe, 1, record.tmpl);
  sort_faults(out.detail);
  for (const auto& f : out.detail) {
    const double full = record.tiers.value(tier_of(feature_label(f.key.kind, f.key.feature), record.tierRules));
    out.weighted += record.weights.weight(f.key, full);
  }
  out.faults = static_cast<double>(out.detail.size());
  out.thresholds = record.thresholds;
  out.decision = decide(out.weighted, out.faults, out.thresholds);
  return out;
}

AttemptResult verify_attempt(const GestureTrace& probe, const EnrollmentRecord& record) {
  auto processed = preprocess(probe, record.preprocess);
  processed.meta.round = 1;
  return verify_features(extract_features(std::move(processed)), record);
}

VerificationOutcome verify_session(const EnrollmentRecord& record,
                                   const AttemptSource& source,
                                   int extraAttempts,
                                   const std::function<void(const VerificationOutcome&)>& onFallback) {
  VerificationOutcome out;
  for (int t = 1; t <= extraAttempts + 1; ++t) {
    auto trace = source(t);
    if (!trace) break;
    out.attempts.push_back(verify_attempt(*trace, record));
    out.attemptsUsed = t;
    if (out.attempts.back().decision) {
      out.decision = true;
      return out;
    }
  }
  out.fallbackRequired = true;
  if (onFallback) onFallback(out);
  return out;
}

GestureChoice select_gesture(std::span<const GestureMeta> registry, std::mt19937_64& rng) {
  if (registry.empty()) throw EmptyRegistry();
  std::uniform_int_distribution<std::size_t> pick(0, registry.size() - 1);
  const auto& meta = registry[pick(rng)];
  GestureChoice choice{meta.gestureId, std::nullopt};
  if (!meta.secretMode) choice.displayName = meta.name;
  return choice;
}

}  // namespace smaug
