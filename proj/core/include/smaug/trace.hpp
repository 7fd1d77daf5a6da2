#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace smaug {

using Vec3 = std::array<double, 3>;

enum class TouchAction : std::uint8_t { Down, PointerDown, Move, PointerUp, Up };

std::string_view to_string(TouchAction action) noexcept;
std::optional<TouchAction> parse_touch_action(std::string_view token) noexcept;

inline bool is_down(TouchAction a) noexcept {
  return a == TouchAction::Down || a == TouchAction::PointerDown;
}
inline bool is_up(TouchAction a) noexcept {
  return a == TouchAction::Up || a == TouchAction::PointerUp;
}

/// One pointer sample. Gesture id and round live on the enclosing trace.
struct TouchEvent {
  std::int64_t timeNs = 0;
  int pointerId = 0;
  int pointerNumber = 0;
  TouchAction action = TouchAction::Move;
  double x = 0.0;
  double y = 0.0;
  double pressure = 0.0;  // [0, 2]
  double size = 0.0;      // [0, 1]

  friend bool operator==(const TouchEvent&, const TouchEvent&) = default;
};

/// Gyroscope (rad/s) or linear accelerometer (m/s^2) sample; the sensor is
/// implied by the list holding it.
struct MotionEvent {
  std::int64_t timeNs = 0;
  Vec3 v{};

  friend bool operator==(const MotionEvent&, const MotionEvent&) = default;
};

struct GestureMeta {
  std::string gestureId;
  std::string name;
  std::optional<std::string> backgroundImage;
  bool secretMode = false;
  bool backgroundImageMode = false;
  int round = 1;

  friend bool operator==(const GestureMeta&, const GestureMeta&) = default;
};

/// One captured round: metadata plus the three raw event streams.
struct GestureTrace {
  GestureMeta meta;
  std::vector<TouchEvent> touch;
  std::vector<MotionEvent> gyro;
  std::vector<MotionEvent> accel;

  friend bool operator==(const GestureTrace&, const GestureTrace&) = default;
};

struct Violation {
  std::string invariant;
  std::size_t index = 0;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Parses a `#SMAUG-TRACE v1` document. Streams are stably sorted by time
/// (touch by time then pointer number). Throws MalformedDocument or
/// SchemaViolation.
GestureTrace parse_trace(std::string_view document);

/// Canonical, deterministic rendering of a trace.
std::string serialize_trace(const GestureTrace& trace);

/// Lists every broken invariant; empty when the trace is valid.
std::vector<Violation> validate_trace(const GestureTrace& trace);

/// Percent-encoding used for text fields of the line formats.
std::string encode_text(std::string_view text);
std::string decode_text(std::string_view text);

}  // namespace smaug
