#include "inspect.hpp"

#include <cstdio>

namespace smaug::tools {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void stat_row(std::string& out, std::string_view label, const FiveStat& s) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "  %-22.*s %12.6g %12.6g %12.6g %12.6g %12.6g\n", static_cast<int>(label.size()),
                label.data(), s.min, s.max, s.stdev, s.median, s.am);
  out += buf;
}

void stat_header(std::string& out, std::string_view title) {
  out += title;
  out += '\n';
  char buf[160];
  std::snprintf(buf, sizeof buf, "  %-22s %12s %12s %12s %12s %12s\n", "feature", "min", "max", "stdev", "median", "am");
  out += buf;
}

void stat_table(std::string& out,
                std::string_view title,
                const std::optional<std::vector<FiveStat>>& table,
                std::span<const std::string> names) {
  if (!table) {
    out += title;
    out += ": absent\n";
    return;
  }
  stat_header(out, title);
  for (std::size_t f = 0; f < table->size(); ++f) stat_row(out, names[f], (*table)[f]);
}

std::string_view mode_name(const EnrollmentRecord& r) {
  const bool bg = r.tmpl.meta.backgroundImageMode;
  const bool multi = r.tmpl.multi_touch();
  return bg ? (multi ? "background image, multi-touch" : "background image, single-touch")
            : (multi ? "plain, multi-touch" : "plain, single-touch");
}

}  // namespace

std::string describe_record(const EnrollmentRecord& r) {
  const auto& t = r.tmpl;
  const auto& m = t.meta;
  std::string out;
  out += "user: " + r.user + "\n";
  out += "gesture: " + m.gestureId + " (name " + m.name + (m.secretMode ? ", secret" : "") + ")\n";
  if (m.backgroundImage) out += "background image: " + *m.backgroundImage + "\n";
  out += "created: " + std::to_string(r.createdAt) + "\n";
  out += "rounds: " + std::to_string(t.rounds.size()) + ", strokes: " + std::to_string(t.stroke_count()) +
         ", max pointers: " + std::to_string(t.touchGesture.maxPointers) + "\n";
  out += "mode: " + std::string(mode_name(r)) + "\n";
  out += "motion window: -" + num(r.preprocess.offsetStartMs) + " ms / +" + num(r.preprocess.offsetEndMs) +
         " ms, fusion window " + num(r.preprocess.fusionWindowMs) + " ms\n";
  out += "attempts per session: " + std::to_string(r.extraAttempts + 1) + "\n";
  out += "tiers: " + num(r.tiers.one) + " / " + num(r.tiers.two) + " / " + num(r.tiers.three) + "\n";
  const auto& p = r.thresholds.params;
  out += "indicators: I_F " + num(r.weights.faultIndicator) + ", I_W " + num(r.weights.weightIndicator) + "\n";
  out += "threshold weight: " + num(r.thresholds.weight) + " (P_W* " + num(p.weightMul) + ", P_W+ " + num(p.weightAdd) + ")\n";
  out += "threshold faults: " + num(r.thresholds.fault) + " (P_F* " + num(p.faultMul) + ", P_F+ " + num(p.faultAdd) + ")\n";

  stat_header(out, "\ngesture features");
  const auto bounded = bounded_round_features();
  const auto roundNames = round_feature_names();
  for (std::size_t i = 0; i < t.touchGesture.bounded.size(); ++i) stat_row(out, roundNames[bounded[i]], t.touchGesture.bounded[i]);

  for (std::size_t s = 0; s < t.touchDtw.size(); ++s) {
    stat_header(out, "\nstroke " + std::to_string(s) + " dtw distances (best round " +
                         std::to_string(t.touchDtw[s].bestRound + 1) + ")");
    const auto names = touch_dtw_feature_names();
    for (std::size_t f = 0; f < names.size(); ++f) stat_row(out, names[f], t.touchDtw[s].distance[f]);
  }
  for (std::size_t s = 0; s < t.touchStroke.size(); ++s) {
    stat_header(out, "\nstroke " + std::to_string(s) + " features");
    const auto names = stroke_feature_names();
    for (std::size_t f = 0; f < t.touchStroke[s].size(); ++f) stat_row(out, names[f], t.touchStroke[s][f]);
  }
  out += '\n';
  stat_table(out, "gyroscope features", t.gyro, motion_feature_names());
  out += '\n';
  stat_table(out, "accelerometer features", t.accel, motion_feature_names());
  out += '\n';
  stat_table(out, "fusion features", t.fusion, fusion_feature_names());
  out += '\n';
  if (t.fusionDtw) {
    stat_header(out, "fusion dtw distances (best round " + std::to_string(t.fusionDtw->bestRound + 1) + ")");
    const auto names = fusion_sequence_names();
    for (std::size_t f = 0; f < names.size(); ++f) stat_row(out, names[f], t.fusionDtw->distance[f]);
  } else {
    out += "fusion dtw distances: absent\n";
  }

  std::size_t reduced = 0;
  std::string lines;
  for (const auto& [key, w] : r.weights.weights) {
    const double full = r.tiers.value(tier_of(feature_label(key.kind, key.feature), r.tierRules));
    if (w >= full) continue;
    ++reduced;
    lines += "  " + feature_label(key.kind, key.feature) + " " + std::string(to_string(key.cmp));
    if (key.stroke >= 0) lines += " stroke " + std::to_string(key.stroke);
    lines += ": " + num(w) + " of " + num(full) + "\n";
  }
  out += "\nweights: " + std::to_string(r.weights.weights.size()) + " comparison features, " + std::to_string(reduced) +
         " reduced by enrollment faults\n";
  out += lines;
  return out;
}

}  // namespace smaug::tools
