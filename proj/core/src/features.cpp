#include "smaug/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace smaug {

namespace {

constexpr double kNsPerSecond = 1e9;

std::vector<std::string> make_round_names() {
  return {"records",   "frequency",  "maxPointers", "overallLengthPx", "overallTimeNs",
          "strokeCount", "boxCenterX", "boxCenterY",  "boxWidth",        "boxHeight"};
}

constexpr std::array<std::string_view, kStrokeSequenceCount> kSequenceNames = {
    "x", "y", "P", "S", "C", "D", "VX", "VY", "AX", "AY"};
constexpr std::array<std::string_view, kStatCount> kStatNames = {
    "min", "max", "am", "rms", "var", "stdev", "mad", "skew", "kurt"};
constexpr std::array<std::string_view, kStrokeScalarCount> kScalarNames = {
    "lengthNs",  "lengthPx",  "startX",   "startY",         "endX",           "endY",
    "startTimeNs", "endTimeNs", "sumLenX", "sumLenY",        "boxWidth",       "boxHeight",
    "boxCenterX", "boxCenterY", "pctLengthPx", "pctLengthNs"};

// Moments reported per motion axis (min/max are left to the norm block).
constexpr std::array<std::string_view, 7> kMotionStatNames = {"am", "rms", "var", "stdev", "mad", "skew", "kurt"};

double polyline_length(std::span<const double> x, std::span<const double> y) {
  double len = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) len += std::hypot(x[i] - x[i - 1], y[i] - y[i - 1]);
  return len;
}

void push_stats(FeatureVector& out, const SequenceStats& s) {
  out.insert(out.end(), {s.min, s.max, s.am, s.rms, s.var, s.stdev, s.mad, s.skew, s.kurt});
}

// First difference quotient per second, skipping non-increasing timestamps.
void difference(std::span<const std::int64_t> times,
                const std::array<std::vector<double>, 3>& values,
                std::vector<std::int64_t>& out_times,
                std::array<std::vector<double>, 3>& out_values) {
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (times[i] <= times[i - 1]) continue;
    const double dt = static_cast<double>(times[i] - times[i - 1]) / kNsPerSecond;
    for (int a = 0; a < 3; ++a) out_values[a].push_back((values[a][i] - values[a][i - 1]) / dt);
    out_times.push_back(times[i]);
  }
}

}  // namespace

StrokeSeries touch_event_features(std::span<const TouchEvent> stroke, std::int64_t originNs) {
  StrokeSeries s;
  const std::size_t n = stroke.size();
  for (const auto& e : stroke) {
    s.x.push_back(e.x);
    s.y.push_back(e.y);
    s.t.push_back(static_cast<double>(e.timeNs - originNs));
    s.pressure.push_back(e.pressure);
    s.size.push_back(e.size);
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    double d = std::atan2(s.y[i + 1] - s.y[i], s.x[i + 1] - s.x[i]);
    if (d == -std::numbers::pi) d = std::numbers::pi;
    s.direction.push_back(d);
  }

  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double phi_x = s.x[i + 1] - 2.0 * s.x[i] + s.x[i - 1];
    const double phi_y = s.y[i + 1] - 2.0 * s.y[i] + s.y[i - 1];
    const double theta_x = 0.5 * (s.x[i + 1] - s.x[i - 1]);
    const double theta_y = 0.5 * (s.y[i + 1] - s.y[i - 1]);
    const double denom = std::pow(theta_x * theta_x + theta_y * theta_y, 1.5);
    s.curvature.push_back(denom == 0.0 ? 0.0 : (4.0 * phi_y * theta_x - 4.0 * phi_x * theta_y) / denom);
  }

  std::vector<double> vel_t;
  for (std::size_t i = 1; i < n; ++i) {
    const auto dt = stroke[i].timeNs - stroke[i - 1].timeNs;
    if (dt <= 0) continue;
    s.vx.push_back((s.x[i] - s.x[i - 1]) / static_cast<double>(dt));
    s.vy.push_back((s.y[i] - s.y[i - 1]) / static_cast<double>(dt));
    vel_t.push_back(s.t[i]);
  }
  for (std::size_t k = 1; k < s.vx.size(); ++k) {
    const double dt = vel_t[k] - vel_t[k - 1];
    s.ax.push_back((s.vx[k] - s.vx[k - 1]) / dt);
    s.ay.push_back((s.vy[k] - s.vy[k - 1]) / dt);
  }
  return s;
}

std::span<const std::string> round_feature_names() {
  static const std::vector<std::string> names = make_round_names();
  return names;
}

std::span<const RoundFeature> bounded_round_features() {
  static constexpr std::array<RoundFeature, 7> kBounded = {
      kRecords, kOverallLengthPx, kOverallTimeNs, kBoxCenterX, kBoxCenterY, kBoxWidth, kBoxHeight};
  return kBounded;
}

int max_simultaneous_pointers(const StrokedTouchSet& touch) {
  int active = 0;
  int most = 0;
  for (const auto& e : touch.events) {
    if (is_down(e.action)) most = std::max(most, ++active);
    if (is_up(e.action)) --active;
  }
  return most;
}

FeatureVector touch_round_features(const StrokedTouchSet& touch) {
  FeatureVector f(kRoundFeatureCount, 0.0);
  double length = 0.0;
  double time = 0.0;
  for (const auto& stroke : touch.strokes) {
    const auto& first = touch.events[stroke.events.front()];
    const auto& last = touch.events[stroke.events.back()];
    time += static_cast<double>(last.timeNs - first.timeNs);
    for (std::size_t k = 1; k < stroke.events.size(); ++k) {
      const auto& a = touch.events[stroke.events[k - 1]];
      const auto& b = touch.events[stroke.events[k]];
      length += std::hypot(b.x - a.x, b.y - a.y);
    }
  }
  f[kRecords] = static_cast<double>(touch.events.size());
  f[kFrequency] = time > 0.0 ? f[kRecords] / (time / kNsPerSecond) : 0.0;
  f[kMaxPointers] = max_simultaneous_pointers(touch);
  f[kOverallLengthPx] = length;
  f[kOverallTimeNs] = time;
  f[kStrokeCount] = static_cast<double>(touch.strokes.size());
  if (!touch.events.empty()) {
    auto [xmin, xmax] = std::minmax_element(touch.events.begin(), touch.events.end(),
                                            [](const auto& a, const auto& b) { return a.x < b.x; });
    auto [ymin, ymax] = std::minmax_element(touch.events.begin(), touch.events.end(),
                                            [](const auto& a, const auto& b) { return a.y < b.y; });
    f[kBoxWidth] = xmax->x - xmin->x;
    f[kBoxHeight] = ymax->y - ymin->y;
    f[kBoxCenterX] = 0.5 * (xmin->x + xmax->x);
    f[kBoxCenterY] = 0.5 * (ymin->y + ymax->y);
  }
  return f;
}

std::span<const std::string> stroke_feature_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (auto seq : kSequenceNames)
      for (auto stat : kStatNames) v.push_back(std::string(seq) + "." + std::string(stat));
    for (auto scalar : kScalarNames) v.emplace_back(scalar);
    return v;
  }();
  return names;
}

std::vector<FeatureVector> touch_stroke_features(const StrokedTouchSet& touch,
                                                 std::span<const StrokeSeries> series,
                                                 const FeatureVector& round) {
  std::vector<FeatureVector> rows;
  rows.reserve(series.size());
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    FeatureVector f;
    f.reserve(kStrokeFeatureCount);
    for (const auto* seq : {&s.x, &s.y, &s.pressure, &s.size, &s.curvature, &s.direction, &s.vx, &s.vy, &s.ax, &s.ay})
      push_stats(f, summarize(*seq));

    const auto& events = touch.strokes[k].events;
    const auto& first = touch.events[events.front()];
    const auto& last = touch.events[events.back()];
    const double length_ns = static_cast<double>(last.timeNs - first.timeNs);
    const double length_px = polyline_length(s.x, s.y);
    double sum_x = 0.0, sum_y = 0.0;
    for (std::size_t i = 1; i < s.x.size(); ++i) {
      sum_x += std::abs(s.x[i] - s.x[i - 1]);
      sum_y += std::abs(s.y[i] - s.y[i - 1]);
    }
    const auto [xmin, xmax] = std::minmax_element(s.x.begin(), s.x.end());
    const auto [ymin, ymax] = std::minmax_element(s.y.begin(), s.y.end());

    FeatureVector scalars(kStrokeScalarCount, 0.0);
    scalars[kLengthNs] = length_ns;
    scalars[kLengthPx] = length_px;
    scalars[kStartX] = s.x.front();
    scalars[kStartY] = s.y.front();
    scalars[kEndX] = s.x.back();
    scalars[kEndY] = s.y.back();
    scalars[kStartTimeNs] = s.t.front();
    scalars[kEndTimeNs] = s.t.back();
    scalars[kSumLenX] = sum_x;
    scalars[kSumLenY] = sum_y;
    scalars[kStrokeBoxWidth] = *xmax - *xmin;
    scalars[kStrokeBoxHeight] = *ymax - *ymin;
    scalars[kStrokeBoxCenterX] = 0.5 * (*xmin + *xmax);
    scalars[kStrokeBoxCenterY] = 0.5 * (*ymin + *ymax);
    scalars[kPctLengthPx] = round[kOverallLengthPx] > 0.0 ? 100.0 * length_px / round[kOverallLengthPx] : 0.0;
    scalars[kPctLengthNs] = round[kOverallTimeNs] > 0.0 ? 100.0 * length_ns / round[kOverallTimeNs] : 0.0;
    f.insert(f.end(), scalars.begin(), scalars.end());
    rows.push_back(std::move(f));
  }
  return rows;
}

DifferentiatedSeries differentiate(std::span<const std::int64_t> times,
                                   const std::array<std::vector<double>, 3>& axes) {
  DifferentiatedSeries d;
  d.values[0] = axes;
  d.times[0].assign(times.begin(), times.end());
  difference(d.times[0], d.values[0], d.times[1], d.values[1]);
  difference(d.times[1], d.values[1], d.times[2], d.values[2]);
  return d;
}

DifferentiatedSeries motion_event_features(std::span<const MotionEvent> events) {
  std::vector<std::int64_t> times;
  std::array<std::vector<double>, 3> axes;
  for (const auto& e : events) {
    times.push_back(e.timeNs);
    for (int a = 0; a < 3; ++a) axes[a].push_back(e.v[a]);
  }
  return differentiate(times, axes);
}

std::span<const std::string> motion_feature_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (int o = 0; o < 3; ++o)
      for (int a = 1; a <= 3; ++a)
        for (auto stat : kMotionStatNames)
          v.push_back("o" + std::to_string(o) + ".a" + std::to_string(a) + "." + std::string(stat));
    for (int o = 0; o < 3; ++o) {
      const auto p = "o" + std::to_string(o) + ".";
      for (const char* n : {"corr12", "corr13", "corr23", "norm1", "normInf", "normF", "l2sq.min", "l2sq.max", "l2sq.am"})
        v.push_back(p + n);
    }
    return v;
  }();
  return names;
}

MatrixNorms matrix_norms(const std::array<std::vector<double>, 3>& columns) {
  MatrixNorms n;
  const std::size_t rows = columns[0].size();
  double squares = 0.0;
  for (const auto& col : columns) {
    double abs_sum = 0.0;
    for (double v : col) {
      abs_sum += std::abs(v);
      squares += v * v;
    }
    n.one = std::max(n.one, abs_sum);
  }
  n.frobenius = std::sqrt(squares);
  n.rowSquaredL2.resize(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    double abs_row = 0.0, sq_row = 0.0;
    for (const auto& col : columns) {
      abs_row += std::abs(col[i]);
      sq_row += col[i] * col[i];
    }
    n.inf = std::max(n.inf, abs_row);
    n.rowSquaredL2[i] = sq_row;
  }
  return n;
}

FeatureVector motion_round_features(const DifferentiatedSeries& series) {
  FeatureVector f;
  f.reserve(kMotionFeatureCount);
  for (int o = 0; o < 3; ++o) {
    for (int a = 0; a < 3; ++a) {
      const auto s = summarize(series.values[o][a]);
      f.insert(f.end(), {s.am, s.rms, s.var, s.stdev, s.mad, s.skew, s.kurt});
    }
  }
  for (int o = 0; o < 3; ++o) {
    const auto& cols = series.values[o];
    f.push_back(pearson(cols[0], cols[1]));
    f.push_back(pearson(cols[0], cols[2]));
    f.push_back(pearson(cols[1], cols[2]));
    const auto norms = matrix_norms(cols);
    f.insert(f.end(), {norms.one, norms.inf, norms.frobenius});
    const auto l2 = summarize(norms.rowSquaredL2);
    f.insert(f.end(), {l2.min, l2.max, l2.am});
  }
  return f;
}

std::span<const std::string> fusion_sequence_names() {
  static const std::vector<std::string> names = {"angle0", "angleRate0", "angle1",
                                                 "angleRate1", "angle2", "angleRate2"};
  return names;
}

double vector_angle(const Vec3& a, const Vec3& b) {
  const double na = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
  const double nb = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
  if (na < 1e-12 || nb < 1e-12) return 0.0;
  // Same angle as arccos of the normalized dot product, but atan2 of the
  // cross and dot products stays accurate near 0 and pi.
  const double cx = a[1] * b[2] - a[2] * b[1];
  const double cy = a[2] * b[0] - a[0] * b[2];
  const double cz = a[0] * b[1] - a[1] * b[0];
  const double dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  return std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), dot);
}

FusionSeries motion_fusion_series(std::span<const FusionEvent> fusion) {
  std::vector<std::int64_t> times;
  std::array<std::vector<double>, 3> g, a;
  for (const auto& e : fusion) {
    times.push_back(e.timeNs);
    for (int k = 0; k < 3; ++k) {
      g[k].push_back(e.gyro[k]);
      a[k].push_back(e.accel[k]);
    }
  }
  FusionSeries out;
  out.gyro = differentiate(times, g);
  out.accel = differentiate(times, a);

  for (int o = 0; o < 3; ++o) {
    auto& angle = out.angles[2 * o];
    auto& rate = out.angles[2 * o + 1];
    const auto& ts = out.gyro.times[o];
    const auto& gv = out.gyro.values[o];
    const auto& av = out.accel.values[o];
    for (std::size_t i = 0; i < ts.size(); ++i)
      angle.push_back(vector_angle({gv[0][i], gv[1][i], gv[2][i]}, {av[0][i], av[1][i], av[2][i]}));
    for (std::size_t i = 1; i < ts.size(); ++i)
      rate.push_back((angle[i] - angle[i - 1]) / (static_cast<double>(ts[i] - ts[i - 1]) / kNsPerSecond));
  }
  return out;
}

std::span<const std::string> fusion_feature_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j) v.push_back("pcc" + std::to_string(i) + std::to_string(j));
    return v;
  }();
  return names;
}

FeatureVector fusion_correlations(std::span<const FusionEvent> fusion) {
  std::array<std::vector<double>, 3> g, a;
  for (const auto& e : fusion) {
    for (int k = 0; k < 3; ++k) {
      g[k].push_back(e.gyro[k]);
      a[k].push_back(e.accel[k]);
    }
  }
  FeatureVector f;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) f.push_back(pearson(g[i], a[j]));
  return f;
}

std::vector<StrokeSeries> stroke_series(const StrokedTouchSet& touch) {
  std::vector<StrokeSeries> out;
  if (touch.events.empty()) return out;
  const auto origin = touch.events.front().timeNs;
  std::vector<TouchEvent> buffer;
  for (const auto& stroke : touch.strokes) {
    buffer.clear();
    for (auto idx : stroke.events) buffer.push_back(touch.events[idx]);
    out.push_back(touch_event_features(buffer, origin));
  }
  return out;
}

RoundFeatures extract_features(ProcessedRound round) {
  RoundFeatures rf;
  rf.round = std::move(round);
  const auto& touch = rf.round.touch;
  rf.strokeSeries = stroke_series(touch);
  rf.touchRound = touch_round_features(touch);
  rf.strokes = touch_stroke_features(touch, rf.strokeSeries, rf.touchRound);
  if (!rf.round.gyro.empty()) rf.gyro = motion_round_features(motion_event_features(rf.round.gyro));
  if (!rf.round.accel.empty()) rf.accel = motion_round_features(motion_event_features(rf.round.accel));
  if (rf.round.fusion.size() >= kMinFusionEvents) {
    rf.fusionSeries = motion_fusion_series(rf.round.fusion);
    rf.fusion = fusion_correlations(rf.round.fusion);
  }
  return rf;
}

StrokeStructure stroke_structure(const StrokedTouchSet& touch, std::size_t stroke) {
  const auto& down = touch.events[touch.strokes[stroke].events.front()];
  return {down.pointerId, down.pointerNumber};
}

}  // namespace smaug
