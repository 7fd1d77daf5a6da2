#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "smaug/authflow.hpp"
#include "smaug/config.hpp"
#include "smaug/trace.hpp"

namespace smaug::synth {

using Point = std::array<double, 2>;

struct StrokeShape {
  std::vector<Point> points;  // control points of a Catmull-Rom curve, px
  double startMs = 0.0;       // offset from the gesture's first touch
  double durationMs = 500.0;
};

/// Smooth nominal device motion: per axis, sum of two sinusoids plus a bias.
struct MotionAxis {
  double bias = 0.0;
  std::array<double, 2> amplitude{};
  std::array<double, 2> frequencyHz{};
  std::array<double, 2> phase{};
};

struct MotionProfile {
  std::array<MotionAxis, 3> gyro;   // rad/s
  std::array<MotionAxis, 3> accel;  // m/s^2
};

struct GestureShape {
  std::string name;
  std::vector<StrokeShape> strokes;
  double pressure = 0.8;
  double size = 0.12;
  MotionProfile motion;
};

/// Built-in shapes: "A", "Bar", "square", "DC", "L", "Z".
const std::vector<GestureShape>& shape_catalog();
const GestureShape& find_shape(std::string_view name);

/// Shape document: {"shapes": [{"name": ..., "pressure": ..., "size": ...,
/// "strokes": [{"points": [[x, y], ...], "startMs": ..., "durationMs": ...}],
/// "motion": {"gyro": [axis, axis, axis], "accel": [...]}}]} where an axis is
/// {"bias": b, "amplitude": [a1, a2], "frequencyHz": [f1, f2], "phase": [p1, p2]}.
/// A shape without "motion" gets the default motion profile.
std::vector<GestureShape> parse_shapes(std::string_view json);

/// A simulated person. Round-to-round variation comes from bounded latent
/// factors drawn uniformly from [-1, 1] and scaled by the jitter fields.
struct UserProfile {
  std::uint64_t seed = 1;
  double translationPx = 10.0;   // whole-gesture shift
  double scaleJitter = 0.03;     // whole-gesture relative scale
  double pointJitterPx = 3.0;    // per control point
  double timingJitterMs = 20.0;  // per stroke start offset
  double durationJitter = 0.04;  // per stroke relative duration
  double tempo = 1.0;            // time scale of the person's drawing
  double tempoJitter = 0.04;
  double pressureLevel = 1.0;    // multiplier of the shape's pressure
  double pressureJitter = 0.04;
  double sizeLevel = 1.0;
  double sizeJitter = 0.04;
  double motionGain = 1.0;
  double motionJitter = 0.06;    // amplitude and phase perturbation
  double driftPx = 0.0;          // translation added per round
  double warmup = 1.0;           // extra variation of early rounds, decays with warmupRounds
  double warmupRounds = 2.0;

  friend bool operator==(const UserProfile&, const UserProfile&) = default;
};

/// An informed attacker: copies the shape (geometryFidelity 1 = exactly),
/// but with dynamics that differ from the victim by `dynamicsDivergence`
/// (0 = the victim's own dynamics).
struct ImpostorProfile {
  UserProfile base;
  double geometryFidelity = 1.0;
  double dynamicsDivergence = 1.0;

  friend bool operator==(const ImpostorProfile&, const ImpostorProfile&) = default;
};

UserProfile default_user_profile();
ImpostorProfile default_impostor_profile();

/// Profile document: {"user": {...UserProfile fields...}, "impostor":
/// {"seed": ..., "geometryFidelity": ..., "dynamicsDivergence": ..., ...}}.
/// Missing fields keep their defaults.
std::pair<UserProfile, ImpostorProfile> parse_profiles(std::string_view json);

struct GenOptions {
  double touchHz = 60.0;
  double motionHz = 200.0;
  double motionLeadMs = 400.0;  // motion captured before the first touch
  double motionTailMs = 350.0;  // and after the last
  bool secretMode = true;
  bool backgroundImageMode = false;
};

/// Deterministic in (shape, profile, round, options). Touch frames share one
/// timestamp per frame; POINTER_UP is stamped on every pointer of the frame
/// in which one of several pointers lifts, as Android reports it.
GestureTrace gen_trace(const GestureShape& shape, const UserProfile& user, int round, const GenOptions& options = {});

/// Trace of an impostor imitating `user`.
GestureTrace gen_impostor_trace(const GestureShape& shape,
                                const UserProfile& user,
                                const ImpostorProfile& impostor,
                                int round,
                                const GenOptions& options = {});

GestureMeta shape_meta(const GestureShape& shape, const GenOptions& options);

struct ExperimentReport {
  std::string shape;
  int trials = 0;
  int maxAttempts = 0;
  std::vector<int> genuineAcceptedAt;   // sessions first accepted at attempt t (index t-1)
  std::vector<int> impostorAcceptedAt;
  std::array<long, 7> genuineFaults{};  // fault counts per check category over all attempts
  std::array<long, 7> impostorFaults{};
  long genuineAttempts = 0;
  long impostorAttempts = 0;
  double faultIndicator = 0.0;
  double weightIndicator = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;

  /// Share of genuine sessions accepted within the first `attempts` attempts.
  double tpr(int attempts) const;
  /// Share of impostor sessions accepted within the first `attempts` attempts.
  double fpr(int attempts) const;

  friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

/// Enrolls from `user` (rounds 1..P_E), then runs `trials` genuine and
/// `trials` impostor sessions of up to P_V + 1 attempts each.
ExperimentReport run_experiment(const GestureShape& shape,
                                const UserProfile& user,
                                const ImpostorProfile& impostor,
                                int trials,
                                const SystemConfig& config,
                                const GenOptions& options = {});

enum class ReportFormat { Text, Csv };

/// CSV columns: shape,population,metric,key,value. Metrics: trials,
/// accepted_at (key = attempt), faults (key = check category), attempts,
/// and for population "enroll": fault_indicator, weight_indicator, theta1,
/// theta2.
std::string emit_report(const std::vector<ExperimentReport>& reports, ReportFormat format);
std::vector<ExperimentReport> parse_report_csv(std::string_view csv);

}  // namespace smaug::synth
