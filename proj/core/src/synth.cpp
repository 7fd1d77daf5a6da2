#include "smaug/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>

#include <nlohmann/json.hpp>

#include "line_format.hpp"
#include "smaug/errors.hpp"

namespace smaug::synth {

namespace {

using nlohmann::json;

constexpr double kPi = std::numbers::pi;
constexpr std::int64_t kEpochNs = 1'700'000'000'000'000'000;
constexpr std::int64_t kRoundSpacingNs = 60'000'000'000;
constexpr std::int64_t kAccelLagNs = 1'000'000;

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) { return mix(seed ^ mix(stream)); }

// Uniform draws with a bit-exact recipe so that traces do not depend on the
// standard library's distribution implementations.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : engine_(seed) {}
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double symmetric() { return 2.0 * unit() - 1.0; }
  // Random sign times a magnitude in [0.5, 1].
  double direction() {
    const double m = 0.5 + 0.5 * unit();
    return unit() < 0.5 ? -m : m;
  }

 private:
  std::mt19937_64 engine_;
};

MotionProfile default_motion(double phase) {
  MotionProfile m;
  const std::array<std::array<double, 4>, 3> gyro = {{{0.30, 0.12, 1.1, 2.3}, {0.22, 0.10, 0.8, 1.9}, {0.16, 0.07, 1.4, 2.7}}};
  const std::array<std::array<double, 4>, 3> accel = {{{0.60, 0.25, 0.9, 2.1}, {0.50, 0.20, 1.3, 2.6}, {0.40, 0.18, 0.7, 1.7}}};
  for (int a = 0; a < 3; ++a) {
    m.gyro[a] = {0.02 * (a + 1), {gyro[a][0], gyro[a][1]}, {gyro[a][2], gyro[a][3]}, {phase + 0.7 * a, 1.3 * a + 0.4}};
    m.accel[a] = {0.05 * (a + 1), {accel[a][0], accel[a][1]}, {accel[a][2], accel[a][3]}, {phase + 1.1 * a + 0.3, 0.9 * a}};
  }
  return m;
}

std::vector<GestureShape> make_catalog() {
  auto shape = [](std::string name, std::vector<StrokeShape> strokes, double phase) {
    GestureShape s;
    s.name = std::move(name);
    s.strokes = std::move(strokes);
    s.motion = default_motion(phase);
    return s;
  };
  return {
      shape("A",
            {{{{300, 1400}, {430, 930}, {540, 500}, {660, 950}, {780, 1400}}, 0, 750},
             {{{390, 1080}, {540, 1068}, {690, 1080}}, 1050, 320}},
            0.2),
      shape("Bar",
            {{{{420, 500}, {432, 950}, {420, 1400}}, 0, 800},
             {{{660, 500}, {672, 950}, {660, 1400}}, 120, 800}},
            0.9),
      shape("square", {{{{300, 700}, {780, 700}, {780, 1180}, {300, 1180}, {300, 700}}, 0, 1400}}, 1.6),
      shape("DC",
            {{{{300, 600}, {300, 1200}, {520, 1100}, {520, 700}, {300, 600}}, 0, 900},
             {{{900, 650}, {700, 620}, {640, 900}, {700, 1180}, {900, 1150}}, 1200, 700}},
            2.3),
      shape("L", {{{{350, 500}, {342, 900}, {340, 1300}, {800, 1310}}, 0, 700}}, 3.0),
      shape("Z", {{{{300, 600}, {780, 610}, {300, 1300}, {790, 1290}}, 0, 900}}, 3.7),
  };
}

// Arc-length parametrized Catmull-Rom curve through the control points.
class Curve {
 public:
  explicit Curve(const std::vector<Point>& pts) {
    constexpr int kSteps = 64;
    const std::size_t n = pts.size();
    if (n == 1) {
      samples_.push_back(pts[0]);
      lengths_.push_back(0.0);
      return;
    }
    auto at = [&](std::ptrdiff_t i) { return pts[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, n - 1))]; };
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const auto p0 = at(static_cast<std::ptrdiff_t>(i) - 1), p1 = at(i), p2 = at(i + 1), p3 = at(i + 2);
      for (int k = (i == 0 ? 0 : 1); k <= kSteps; ++k) {
        const double t = static_cast<double>(k) / kSteps;
        const double t2 = t * t, t3 = t2 * t;
        Point q;
        for (int d = 0; d < 2; ++d)
          q[d] = 0.5 * (2 * p1[d] + (-p0[d] + p2[d]) * t + (2 * p0[d] - 5 * p1[d] + 4 * p2[d] - p3[d]) * t2 +
                        (-p0[d] + 3 * p1[d] - 3 * p2[d] + p3[d]) * t3);
        const double step = samples_.empty() ? 0.0 : std::hypot(q[0] - samples_.back()[0], q[1] - samples_.back()[1]);
        lengths_.push_back((lengths_.empty() ? 0.0 : lengths_.back()) + step);
        samples_.push_back(q);
      }
    }
  }

  // Point at arc-length fraction s in [0, 1].
  Point at(double s) const {
    const double total = lengths_.back();
    if (total <= 0.0) return samples_.front();
    const double target = std::clamp(s, 0.0, 1.0) * total;
    const auto it = std::lower_bound(lengths_.begin(), lengths_.end(), target);
    const auto j = static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - lengths_.begin()));
    if (j >= lengths_.size()) return samples_.back();
    const double seg = lengths_[j] - lengths_[j - 1];
    const double w = seg > 0.0 ? (target - lengths_[j - 1]) / seg : 0.0;
    return {samples_[j - 1][0] + w * (samples_[j][0] - samples_[j - 1][0]),
            samples_[j - 1][1] + w * (samples_[j][1] - samples_[j - 1][1])};
  }

 private:
  std::vector<Point> samples_;
  std::vector<double> lengths_;
};

// Fraction of the stroke covered at time fraction u: speed rises towards the
// middle of the stroke and never drops to zero.
double progress(double u) {
  return (0.6 * u + 0.4 * (1.0 - std::cos(kPi * u)) / kPi) / (0.6 + 0.8 / kPi);
}

// Fixed characteristics of whoever draws, before per-round variation.
struct Persona {
  UserProfile jitter;
  double tempo = 1.0;
  double pressure = 1.0;
  double size = 1.0;
  std::array<double, 6> gain{};  // gyro axes then accel axes
  std::array<double, 6> freqScale{};
  std::array<double, 6> phaseShift{};
  std::vector<std::vector<Point>> pointOffset;  // [stroke][point]
  std::vector<double> startShiftMs;
};

Persona user_persona(const GestureShape& shape, const UserProfile& user) {
  Persona p;
  p.jitter = user;
  p.tempo = user.tempo;
  p.pressure = user.pressureLevel;
  p.size = user.sizeLevel;
  Uniform style(derive(user.seed, 0x5157));
  for (int a = 0; a < 6; ++a) {
    p.gain[a] = user.motionGain * (1.0 + 0.2 * style.symmetric());
    p.freqScale[a] = 1.0;
    p.phaseShift[a] = 0.0;
  }
  for (const auto& s : shape.strokes) p.pointOffset.emplace_back(s.points.size(), Point{0.0, 0.0});
  p.startShiftMs.assign(shape.strokes.size(), 0.0);
  return p;
}

Persona impostor_persona(const GestureShape& shape, const UserProfile& user, const ImpostorProfile& imp) {
  Persona p = user_persona(shape, user);
  p.jitter = imp.base;
  const double d = imp.dynamicsDivergence;
  Uniform u(derive(imp.base.seed, 0x1A70));
  p.tempo *= 1.0 + 0.35 * d * u.direction();
  p.pressure *= 1.0 + 0.3 * d * u.direction();
  p.size *= 1.0 + 0.3 * d * u.direction();
  for (int a = 0; a < 6; ++a) {
    p.gain[a] *= 1.0 + 0.5 * d * u.direction();
    p.freqScale[a] = 1.0 + 0.3 * d * u.direction();
    p.phaseShift[a] = 1.5 * d * u.direction();
  }
  for (auto& s : p.startShiftMs) s = 80.0 * d * u.direction();
  const double spread = 80.0 * (1.0 - std::clamp(imp.geometryFidelity, 0.0, 1.0));
  for (auto& stroke : p.pointOffset)
    for (auto& pt : stroke) pt = {spread * u.symmetric(), spread * u.symmetric()};
  return p;
}

// Per-round variation. Early rounds are sloppier while the person gets used
// to the gesture: every draw is widened by 1 + warmup * exp(-(round-1)/warmupRounds).
class Latent {
 public:
  Latent(const UserProfile& j, int round)
      : spread_(1.0 + j.warmup * std::exp(-(std::max(round, 1) - 1) / std::max(j.warmupRounds, 1e-9))),
        draws_(derive(j.seed, static_cast<std::uint64_t>(round))) {}
  double symmetric() { return spread_ * draws_.symmetric(); }

 private:
  double spread_;
  Uniform draws_;
};

struct StrokePlan {
  std::vector<Point> points;
  std::int64_t firstFrame = 0;
  std::int64_t lastFrame = 0;
  int pointerId = 0;
};

double axis_value(const MotionAxis& axis, double tau, double gain, double freqScale, double phase) {
  double v = 0.0;
  for (int j = 0; j < 2; ++j)
    v += axis.amplitude[j] * std::sin(2.0 * kPi * axis.frequencyHz[j] * freqScale * tau + axis.phase[j] + phase);
  return axis.bias + gain * v;
}

GestureTrace render(const GestureShape& shape, const Persona& persona, int round, const GenOptions& opt, GestureMeta meta) {
  const auto& j = persona.jitter;
  Latent lat(j, round);
  const double tempo = persona.tempo * (1.0 + j.tempoJitter * lat.symmetric());
  const double scale = 1.0 + j.scaleJitter * lat.symmetric();
  const double tx = j.translationPx * lat.symmetric() + j.driftPx * round;
  const double ty = j.translationPx * lat.symmetric() + j.driftPx * round;
  const double pressure = persona.pressure * (1.0 + j.pressureJitter * lat.symmetric());
  const double size = persona.size * (1.0 + j.sizeJitter * lat.symmetric());
  std::array<double, 6> amp{}, phase{}, pert{};
  for (int a = 0; a < 6; ++a) {
    amp[a] = 1.0 + j.motionJitter * lat.symmetric();
    phase[a] = j.motionJitter * lat.symmetric();
    pert[a] = j.motionJitter * lat.symmetric();
  }

  double cx = 0.0, cy = 0.0, count = 0.0;
  for (const auto& s : shape.strokes)
    for (const auto& pt : s.points) {
      cx += pt[0];
      cy += pt[1];
      count += 1.0;
    }
  cx /= count;
  cy /= count;

  const double frameNs = 1e9 / opt.touchHz;
  std::vector<StrokePlan> plans;
  std::vector<double> starts, ends;
  for (std::size_t s = 0; s < shape.strokes.size(); ++s) {
    const auto& src = shape.strokes[s];
    StrokePlan plan;
    for (std::size_t i = 0; i < src.points.size(); ++i) {
      const auto& off = persona.pointOffset[s][i];
      const double px = src.points[i][0] + off[0];
      const double py = src.points[i][1] + off[1];
      plan.points.push_back({std::max(0.0, cx + scale * (px - cx) + tx + j.pointJitterPx * lat.symmetric()),
                             std::max(0.0, cy + scale * (py - cy) + ty + j.pointJitterPx * lat.symmetric())});
    }
    const double start = (src.startMs + persona.startShiftMs[s] + j.timingJitterMs * lat.symmetric()) * tempo;
    const double duration = src.durationMs * (1.0 + j.durationJitter * lat.symmetric()) * tempo;
    starts.push_back(start);
    ends.push_back(start + std::max(duration, 1.0));
    plans.push_back(std::move(plan));
  }
  const double origin = *std::min_element(starts.begin(), starts.end());
  for (std::size_t s = 0; s < plans.size(); ++s) {
    plans[s].firstFrame = std::llround((starts[s] - origin) * 1e6 / frameNs);
    plans[s].lastFrame = std::max<std::int64_t>(plans[s].firstFrame + 1, std::llround((ends[s] - origin) * 1e6 / frameNs));
  }

  // Pointer ids: lowest id not held by a stroke still on screen.
  std::vector<std::size_t> order(plans.size());
  for (std::size_t s = 0; s < order.size(); ++s) order[s] = s;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return plans[a].firstFrame < plans[b].firstFrame; });
  for (std::size_t idx = 0; idx < order.size(); ++idx) {
    auto& plan = plans[order[idx]];
    std::vector<int> taken;
    for (std::size_t prev = 0; prev < idx; ++prev) {
      const auto& other = plans[order[prev]];
      if (other.lastFrame >= plan.firstFrame) taken.push_back(other.pointerId);
    }
    int id = 0;
    while (std::find(taken.begin(), taken.end(), id) != taken.end()) ++id;
    plan.pointerId = id;
  }

  const std::int64_t t0 = kEpochNs + static_cast<std::int64_t>(round) * kRoundSpacingNs;
  auto frame_time = [&](std::int64_t k) { return t0 + std::llround(static_cast<double>(k) * frameNs); };

  std::vector<Curve> curves;
  for (const auto& plan : plans) curves.emplace_back(plan.points);

  GestureTrace trace;
  trace.meta = std::move(meta);
  trace.meta.round = round;

  std::int64_t lastFrame = 0;
  for (const auto& p : plans) lastFrame = std::max(lastFrame, p.lastFrame);
  for (std::int64_t k = 0; k <= lastFrame; ++k) {
    std::vector<std::size_t> active;
    for (std::size_t s = 0; s < plans.size(); ++s)
      if (plans[s].firstFrame <= k && k <= plans[s].lastFrame) active.push_back(s);
    if (active.empty()) continue;
    std::sort(active.begin(), active.end(), [&](auto a, auto b) { return plans[a].pointerId < plans[b].pointerId; });

    bool anyBefore = false, anyEnding = false;
    std::size_t remaining = 0;
    for (auto s : active) {
      anyBefore |= plans[s].firstFrame < k;
      anyEnding |= plans[s].lastFrame == k;
      remaining += plans[s].lastFrame > k ? 1 : 0;
    }
    std::size_t lastEnder = active.size();
    for (std::size_t i = 0; i < active.size(); ++i)
      if (plans[active[i]].lastFrame == k) lastEnder = i;

    bool downGiven = anyBefore;
    for (std::size_t i = 0; i < active.size(); ++i) {
      const auto s = active[i];
      const auto& plan = plans[s];
      TouchEvent e;
      e.timeNs = frame_time(k);
      e.pointerId = plan.pointerId;
      e.pointerNumber = static_cast<int>(i);
      if (plan.firstFrame == k) {
        e.action = downGiven ? TouchAction::PointerDown : TouchAction::Down;
        downGiven = true;
      } else if (plan.lastFrame == k) {
        e.action = remaining == 0 && i == lastEnder ? TouchAction::Up : TouchAction::PointerUp;
      } else {
        e.action = anyEnding && remaining > 0 ? TouchAction::PointerUp : TouchAction::Move;
      }
      const double u = static_cast<double>(k - plan.firstFrame) / static_cast<double>(plan.lastFrame - plan.firstFrame);
      const auto pt = curves[s].at(progress(u));
      e.x = pt[0];
      e.y = pt[1];
      e.pressure = std::clamp(shape.pressure * pressure * (0.9 + 0.1 * std::sin(kPi * u)), 0.0, 2.0);
      e.size = std::clamp(shape.size * size * (0.95 + 0.05 * std::sin(kPi * u)), 0.0, 1.0);
      trace.touch.push_back(e);
    }
  }

  const std::int64_t motionStart = t0 - std::llround(opt.motionLeadMs * 1e6);
  const std::int64_t motionEnd = frame_time(lastFrame) + std::llround(opt.motionTailMs * 1e6);
  const double periodNs = 1e9 / opt.motionHz;
  double nominalSpanMs = 0.0;
  for (const auto& s : shape.strokes) nominalSpanMs = std::max(nominalSpanMs, s.startMs + s.durationMs);
  const double spanNs = std::max(1.0, static_cast<double>(frame_time(lastFrame) - t0));
  for (std::int64_t n = 0;; ++n) {
    const std::int64_t t = motionStart + std::llround(static_cast<double>(n) * periodNs);
    if (t > motionEnd) break;
    // Device motion follows the drawing, so it runs on gesture-normalized time.
    const double tau = static_cast<double>(t - t0) / spanNs * nominalSpanMs * 1e-3;
    MotionEvent g{t, {}}, a{t + kAccelLagNs, {}};
    for (int ax = 0; ax < 3; ++ax) {
      const double pg = pert[ax] * std::sin(2.0 * kPi * 0.7 * tau + 0.9 * ax);
      const double pa = pert[3 + ax] * std::sin(2.0 * kPi * 0.6 * tau + 0.5 * ax);
      g.v[ax] = axis_value(shape.motion.gyro[ax], tau, persona.gain[ax] * amp[ax], persona.freqScale[ax],
                           persona.phaseShift[ax] + phase[ax]) + 0.1 * pg;
      a.v[ax] = axis_value(shape.motion.accel[ax], tau, persona.gain[3 + ax] * amp[3 + ax], persona.freqScale[3 + ax],
                           persona.phaseShift[3 + ax] + phase[3 + ax]) + 0.2 * pa;
    }
    trace.gyro.push_back(g);
    trace.accel.push_back(a);
  }
  return trace;
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (const auto it = j.find(key); it != j.end()) out = it->get<T>();
}

void read_user(const json& j, UserProfile& u) {
  read(j, "seed", u.seed);
  read(j, "translationPx", u.translationPx);
  read(j, "scaleJitter", u.scaleJitter);
  read(j, "pointJitterPx", u.pointJitterPx);
  read(j, "timingJitterMs", u.timingJitterMs);
  read(j, "durationJitter", u.durationJitter);
  read(j, "tempo", u.tempo);
  read(j, "tempoJitter", u.tempoJitter);
  read(j, "pressureLevel", u.pressureLevel);
  read(j, "pressureJitter", u.pressureJitter);
  read(j, "sizeLevel", u.sizeLevel);
  read(j, "sizeJitter", u.sizeJitter);
  read(j, "motionGain", u.motionGain);
  read(j, "motionJitter", u.motionJitter);
  read(j, "driftPx", u.driftPx);
  read(j, "warmup", u.warmup);
  read(j, "warmupRounds", u.warmupRounds);
}

MotionAxis read_axis(const json& j) {
  MotionAxis a;
  read(j, "bias", a.bias);
  read(j, "amplitude", a.amplitude);
  read(j, "frequencyHz", a.frequencyHz);
  read(j, "phase", a.phase);
  return a;
}

void append_rate(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  out += buf;
}

}  // namespace

const std::vector<GestureShape>& shape_catalog() {
  static const std::vector<GestureShape> catalog = make_catalog();
  return catalog;
}

const GestureShape& find_shape(std::string_view name) {
  for (const auto& s : shape_catalog())
    if (s.name == name) return s;
  throw NotFound("unknown shape '" + std::string(name) + "'");
}

std::vector<GestureShape> parse_shapes(std::string_view text) {
  try {
    const auto j = json::parse(text);
    std::vector<GestureShape> out;
    for (const auto& js : j.at("shapes")) {
      GestureShape s;
      s.name = js.at("name").get<std::string>();
      read(js, "pressure", s.pressure);
      read(js, "size", s.size);
      for (const auto& st : js.at("strokes")) {
        StrokeShape stroke;
        for (const auto& pt : st.at("points")) stroke.points.push_back({pt.at(0).get<double>(), pt.at(1).get<double>()});
        read(st, "startMs", stroke.startMs);
        read(st, "durationMs", stroke.durationMs);
        if (stroke.points.empty() || !(stroke.durationMs > 0.0))
          throw MalformedDocument("stroke of shape '" + s.name + "' needs points and a positive duration", 0);
        s.strokes.push_back(std::move(stroke));
      }
      if (s.strokes.empty()) throw MalformedDocument("shape '" + s.name + "' has no strokes", 0);
      s.motion = default_motion(0.0);
      if (const auto m = js.find("motion"); m != js.end()) {
        for (int a = 0; a < 3; ++a) {
          if (m->contains("gyro")) s.motion.gyro[a] = read_axis(m->at("gyro").at(a));
          if (m->contains("accel")) s.motion.accel[a] = read_axis(m->at("accel").at(a));
        }
      }
      out.push_back(std::move(s));
    }
    return out;
  } catch (const json::exception& e) {
    throw MalformedDocument(e.what(), 0);
  }
}

UserProfile default_user_profile() { return {}; }

ImpostorProfile default_impostor_profile() {
  ImpostorProfile p;
  p.base.seed = 7777;
  p.base.warmup = 0.0;
  return p;
}

std::pair<UserProfile, ImpostorProfile> parse_profiles(std::string_view text) {
  try {
    const auto j = json::parse(text);
    auto user = default_user_profile();
    auto imp = default_impostor_profile();
    if (const auto u = j.find("user"); u != j.end()) read_user(*u, user);
    if (const auto i = j.find("impostor"); i != j.end()) {
      read_user(*i, imp.base);
      read(*i, "geometryFidelity", imp.geometryFidelity);
      read(*i, "dynamicsDivergence", imp.dynamicsDivergence);
    }
    return {user, imp};
  } catch (const json::exception& e) {
    throw MalformedDocument(e.what(), 0);
  }
}

GestureMeta shape_meta(const GestureShape& shape, const GenOptions& options) {
  GestureMeta meta;
  meta.gestureId = "shape-" + shape.name;
  meta.name = shape.name;
  meta.secretMode = options.secretMode;
  meta.backgroundImageMode = options.backgroundImageMode;
  return meta;
}

GestureTrace gen_trace(const GestureShape& shape, const UserProfile& user, int round, const GenOptions& options) {
  return render(shape, user_persona(shape, user), round, options, shape_meta(shape, options));
}

GestureTrace gen_impostor_trace(const GestureShape& shape,
                                const UserProfile& user,
                                const ImpostorProfile& impostor,
                                int round,
                                const GenOptions& options) {
  return render(shape, impostor_persona(shape, user, impostor), round, options, shape_meta(shape, options));
}

double ExperimentReport::tpr(int attempts) const {
  if (trials == 0) return 0.0;
  int n = 0;
  for (int t = 0; t < attempts && t < static_cast<int>(genuineAcceptedAt.size()); ++t) n += genuineAcceptedAt[t];
  return static_cast<double>(n) / trials;
}

double ExperimentReport::fpr(int attempts) const {
  if (trials == 0) return 0.0;
  int n = 0;
  for (int t = 0; t < attempts && t < static_cast<int>(impostorAcceptedAt.size()); ++t) n += impostorAcceptedAt[t];
  return static_cast<double>(n) / trials;
}

ExperimentReport run_experiment(const GestureShape& shape,
                                const UserProfile& user,
                                const ImpostorProfile& impostor,
                                int trials,
                                const SystemConfig& config,
                                const GenOptions& options) {
  std::vector<GestureTrace> rounds;
  for (int r = 1; r <= config.enrollRounds; ++r) rounds.push_back(gen_trace(shape, user, r, options));
  const auto record = enroll("synthetic", shape_meta(shape, options), rounds, config);

  ExperimentReport rep;
  rep.shape = shape.name;
  rep.trials = trials;
  rep.maxAttempts = config.extraAttempts + 1;
  rep.genuineAcceptedAt.assign(static_cast<std::size_t>(rep.maxAttempts), 0);
  rep.impostorAcceptedAt.assign(static_cast<std::size_t>(rep.maxAttempts), 0);
  rep.faultIndicator = record.weights.faultIndicator;
  rep.weightIndicator = record.weights.weightIndicator;
  rep.theta1 = record.thresholds.weight;
  rep.theta2 = record.thresholds.fault;

  auto session = [&](bool genuine, int trial) {
    const int base = genuine ? config.enrollRounds + 1 + trial * rep.maxAttempts : 1 + trial * rep.maxAttempts;
    auto source = [&](int attempt) -> std::optional<GestureTrace> {
      const int round = base + attempt - 1;
      return genuine ? gen_trace(shape, user, round, options) : gen_impostor_trace(shape, user, impostor, round, options);
    };
    const auto outcome = verify_session(record, source, config.extraAttempts);
    auto& faults = genuine ? rep.genuineFaults : rep.impostorFaults;
    for (const auto& a : outcome.attempts)
      for (const auto& f : a.detail) ++faults[static_cast<std::size_t>(check_category(f.key.kind) - 1)];
    (genuine ? rep.genuineAttempts : rep.impostorAttempts) += static_cast<long>(outcome.attempts.size());
    if (outcome.decision) ++(genuine ? rep.genuineAcceptedAt : rep.impostorAcceptedAt)[outcome.attemptsUsed - 1];
  };
  for (int i = 0; i < trials; ++i) session(true, i);
  for (int i = 0; i < trials; ++i) session(false, i);
  return rep;
}

std::string emit_report(const std::vector<ExperimentReport>& reports, ReportFormat format) {
  std::string out;
  if (format == ReportFormat::Csv) {
    out += "shape,population,metric,key,value\n";
    auto row = [&](const ExperimentReport& r, std::string_view pop, std::string_view metric, long key, double value) {
      out += encode_text(r.shape);
      out += ',';
      out += pop;
      out += ',';
      out += metric;
      out += ',';
      detail::append_int(out, key);
      out += ',';
      detail::append_real(out, value);
      out += '\n';
    };
    for (const auto& r : reports) {
      row(r, "all", "trials", 0, r.trials);
      row(r, "all", "max_attempts", 0, r.maxAttempts);
      row(r, "enroll", "fault_indicator", 0, r.faultIndicator);
      row(r, "enroll", "weight_indicator", 0, r.weightIndicator);
      row(r, "enroll", "theta1", 0, r.theta1);
      row(r, "enroll", "theta2", 0, r.theta2);
      for (const auto& [pop, accepted, faults, attempts] :
           {std::tuple{"genuine", &r.genuineAcceptedAt, &r.genuineFaults, r.genuineAttempts},
            std::tuple{"impostor", &r.impostorAcceptedAt, &r.impostorFaults, r.impostorAttempts}}) {
        row(r, pop, "attempts", 0, static_cast<double>(attempts));
        for (std::size_t t = 0; t < accepted->size(); ++t) row(r, pop, "accepted_at", static_cast<long>(t + 1), (*accepted)[t]);
        for (std::size_t c = 0; c < faults->size(); ++c) row(r, pop, "faults", static_cast<long>(c + 1), static_cast<double>((*faults)[c]));
      }
    }
    return out;
  }

  for (const auto& r : reports) {
    out += "shape " + r.shape + ": " + std::to_string(r.trials) + " genuine and " + std::to_string(r.trials) +
           " impostor sessions, up to " + std::to_string(r.maxAttempts) + " attempts\n";
    out += "  enrollment  I_F=";
    append_rate(out, r.faultIndicator);
    out += " I_W=";
    append_rate(out, r.weightIndicator);
    out += " Theta1=";
    append_rate(out, r.theta1);
    out += " Theta2=";
    append_rate(out, r.theta2);
    out += '\n';
    for (int t = 1; t <= r.maxAttempts; ++t) {
      out += "  attempt<=" + std::to_string(t) + "  TPR=";
      append_rate(out, r.tpr(t));
      out += "  FPR=";
      append_rate(out, r.fpr(t));
      out += '\n';
    }
    auto hist = [&](const char* label, const std::array<long, 7>& faults, long attempts) {
      out += "  ";
      out += label;
      out += " faults per attempt by check:";
      for (long f : faults) {
        out += ' ';
        append_rate(out, attempts > 0 ? static_cast<double>(f) / attempts : 0.0);
      }
      out += '\n';
    };
    hist("genuine ", r.genuineFaults, r.genuineAttempts);
    hist("impostor", r.impostorFaults, r.impostorAttempts);
  }
  return out;
}

std::vector<ExperimentReport> parse_report_csv(std::string_view csv) {
  detail::LineReader reader(csv);
  std::string_view line;
  if (!reader.next(line) || line != "shape,population,metric,key,value")
    throw MalformedDocument("missing report header", 1);
  std::vector<ExperimentReport> out;
  std::map<std::string, std::size_t> index;
  while (reader.next(line)) {
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::size_t start = 0;
    for (auto pos = line.find(','); pos != std::string_view::npos; pos = line.find(',', start)) {
      f.push_back(line.substr(start, pos - start));
      start = pos + 1;
    }
    f.push_back(line.substr(start));
    const auto ln = reader.line_number();
    if (f.size() != 5) throw MalformedDocument("report row needs 5 columns", ln);
    const auto name = decode_text(f[0]);
    auto [it, inserted] = index.emplace(name, out.size());
    if (inserted) {
      out.emplace_back();
      out.back().shape = name;
    }
    auto& r = out[it->second];
    const auto key = detail::parse_int<long>(f[3]);
    const auto value = detail::parse_real(f[4]);
    if (!key || !value) throw MalformedDocument("bad report value", ln);
    const auto pop = f[1];
    const auto metric = f[2];
    if (metric == "trials") r.trials = static_cast<int>(*value);
    else if (metric == "max_attempts") {
      r.maxAttempts = static_cast<int>(*value);
      r.genuineAcceptedAt.assign(static_cast<std::size_t>(r.maxAttempts), 0);
      r.impostorAcceptedAt.assign(static_cast<std::size_t>(r.maxAttempts), 0);
    } else if (metric == "fault_indicator") r.faultIndicator = *value;
    else if (metric == "weight_indicator") r.weightIndicator = *value;
    else if (metric == "theta1") r.theta1 = *value;
    else if (metric == "theta2") r.theta2 = *value;
    else if (metric == "attempts") (pop == "genuine" ? r.genuineAttempts : r.impostorAttempts) = static_cast<long>(*value);
    else if (metric == "accepted_at") {
      auto& v = pop == "genuine" ? r.genuineAcceptedAt : r.impostorAcceptedAt;
      if (*key < 1 || *key > static_cast<long>(v.size())) throw MalformedDocument("attempt out of range", ln);
      v[static_cast<std::size_t>(*key - 1)] = static_cast<int>(*value);
    } else if (metric == "faults") {
      auto& v = pop == "genuine" ? r.genuineFaults : r.impostorFaults;
      if (*key < 1 || *key > 7) throw MalformedDocument("category out of range", ln);
      v[static_cast<std::size_t>(*key - 1)] = static_cast<long>(*value);
    } else {
      throw MalformedDocument("unknown metric '" + std::string(metric) + "'", ln);
    }
  }
  return out;
}

}  // namespace smaug::synth
