#include "smaug/trace.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "line_format.hpp"
#include "trace_lines.hpp"
#include "smaug/errors.hpp"

namespace smaug {

namespace {

constexpr std::string_view kHeader = "#SMAUG-TRACE v1";
constexpr std::string_view kHeaderPrefix = "#SMAUG-TRACE";

bool needs_escape(unsigned char c) { return c <= 0x20 || c == 0x7f || c == '%'; }

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

bool finite3(const Vec3& v) {
  return std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]);
}

void check_touch_ranges(const TouchEvent& e, std::size_t index) {
  if (e.timeNs < 0) throw SchemaViolation("eventTimeNs", index);
  if (e.pointerId < 0) throw SchemaViolation("pointerId", index);
  if (e.pointerNumber < 0) throw SchemaViolation("pointerNumber", index);
  if (!std::isfinite(e.x) || e.x < 0.0) throw SchemaViolation("x", index);
  if (!std::isfinite(e.y) || e.y < 0.0) throw SchemaViolation("y", index);
  if (!(e.pressure >= 0.0 && e.pressure <= 2.0)) throw SchemaViolation("pressure", index);
  if (!(e.size >= 0.0 && e.size <= 1.0)) throw SchemaViolation("size", index);
}

void sort_streams(GestureTrace& trace) {
  std::stable_sort(trace.touch.begin(), trace.touch.end(), [](const auto& a, const auto& b) {
    if (a.timeNs != b.timeNs) return a.timeNs < b.timeNs;
    return a.pointerNumber < b.pointerNumber;
  });
  auto by_time = [](const MotionEvent& a, const MotionEvent& b) { return a.timeNs < b.timeNs; };
  std::stable_sort(trace.gyro.begin(), trace.gyro.end(), by_time);
  std::stable_sort(trace.accel.begin(), trace.accel.end(), by_time);
}

}  // namespace

namespace detail {

double require_real(std::string_view token, std::size_t line) {
  auto v = parse_real(token);
  if (!v) throw MalformedDocument("expected a real, got '" + std::string(token) + "'", line);
  return *v;
}

std::int64_t require_int(std::string_view token, std::size_t line) {
  auto v = parse_int<std::int64_t>(token);
  if (!v) throw MalformedDocument("expected an integer, got '" + std::string(token) + "'", line);
  return *v;
}

GestureMeta parse_meta_fields(const std::vector<std::string_view>& fields, std::size_t line) {
  std::map<std::string_view, std::string_view> kv;
  for (std::size_t i = 1; i < fields.size(); ++i) {
    const auto eq = fields[i].find('=');
    if (eq == std::string_view::npos)
      throw MalformedDocument("META field without '='", line);
    const auto key = fields[i].substr(0, eq);
    if (!kv.emplace(key, fields[i].substr(eq + 1)).second)
      throw MalformedDocument("duplicate META key '" + std::string(key) + "'", line);
  }
  auto get = [&](std::string_view key) -> std::string_view {
    auto it = kv.find(key);
    if (it == kv.end()) throw SchemaViolation(std::string(key), 0);
    return it->second;
  };
  auto flag = [&](std::string_view key) {
    const auto v = get(key);
    if (v == "0") return false;
    if (v == "1") return true;
    throw SchemaViolation(std::string(key), 0);
  };

  GestureMeta meta;
  meta.gestureId = decode_text(get("gestureId"));
  meta.name = decode_text(get("name"));
  meta.round = static_cast<int>(require_int(get("round"), line));
  if (meta.round < 1) throw SchemaViolation("round", 0);
  meta.secretMode = flag("secret");
  meta.backgroundImageMode = flag("bgmode");
  const auto bg = get("bg");
  if (bg != "-") meta.backgroundImage = decode_text(bg);
  return meta;
}

void append_meta_fields(std::string& out, const GestureMeta& m) {
  out += " gestureId=" + encode_text(m.gestureId) + " name=" + encode_text(m.name) + " round=";
  append_int(out, m.round);
  out += m.secretMode ? " secret=1" : " secret=0";
  out += m.backgroundImageMode ? " bgmode=1" : " bgmode=0";
  out += " bg=";
  out += m.backgroundImage ? encode_text(*m.backgroundImage) : std::string("-");
}

void append_touch(std::string& out, const TouchEvent& e) {
  out += "TOUCH ";
  append_int(out, e.timeNs);
  out += ' ';
  append_int(out, e.pointerId);
  out += ' ';
  append_int(out, e.pointerNumber);
  out += ' ';
  out += to_string(e.action);
  for (double c : {e.x, e.y, e.pressure, e.size}) {
    out += ' ';
    append_real(out, c);
  }
  out += '\n';
}

void append_motion(std::string& out, std::string_view tag, const MotionEvent& e) {
  out += tag;
  out += ' ';
  append_int(out, e.timeNs);
  for (double c : e.v) {
    out += ' ';
    append_real(out, c);
  }
  out += '\n';
}

TouchEvent parse_touch_fields(const std::vector<std::string_view>& fields, std::size_t ln) {
  if (fields.size() != 9) throw MalformedDocument("TOUCH record needs 8 fields", ln);
  TouchEvent e;
  e.timeNs = require_int(fields[1], ln);
  const auto id = require_int(fields[2], ln);
  const auto number = require_int(fields[3], ln);
  if (id < INT32_MIN || id > INT32_MAX || number < INT32_MIN || number > INT32_MAX)
    throw MalformedDocument("pointer field out of range", ln);
  e.pointerId = static_cast<int>(id);
  e.pointerNumber = static_cast<int>(number);
  const auto action = parse_touch_action(fields[4]);
  if (!action) throw MalformedDocument("unknown touch action '" + std::string(fields[4]) + "'", ln);
  e.action = *action;
  e.x = require_real(fields[5], ln);
  e.y = require_real(fields[6], ln);
  e.pressure = require_real(fields[7], ln);
  e.size = require_real(fields[8], ln);
  return e;
}

MotionEvent parse_motion_fields(const std::vector<std::string_view>& fields, std::size_t ln) {
  if (fields.size() != 5) throw MalformedDocument(std::string(fields[0]) + " record needs 4 fields", ln);
  MotionEvent e;
  e.timeNs = require_int(fields[1], ln);
  for (int k = 0; k < 3; ++k) e.v[k] = require_real(fields[2 + k], ln);
  return e;
}

}  // namespace detail

std::string_view to_string(TouchAction action) noexcept {
  switch (action) {
    case TouchAction::Down: return "DOWN";
    case TouchAction::PointerDown: return "PDOWN";
    case TouchAction::Move: return "MOVE";
    case TouchAction::PointerUp: return "PUP";
    case TouchAction::Up: return "UP";
  }
  return "?";
}

std::optional<TouchAction> parse_touch_action(std::string_view token) noexcept {
  if (token == "DOWN") return TouchAction::Down;
  if (token == "PDOWN") return TouchAction::PointerDown;
  if (token == "MOVE") return TouchAction::Move;
  if (token == "PUP") return TouchAction::PointerUp;
  if (token == "UP") return TouchAction::Up;
  return std::nullopt;
}

std::string encode_text(std::string_view text) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(text.size());
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (needs_escape(c)) {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xf];
    } else {
      out += ch;
    }
  }
  // A bare "-" marks an absent optional field.
  if (out == "-") return "%2D";
  return out;
}

std::string decode_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '%' && i + 2 < text.size()) {
      const int hi = hex_value(text[i + 1]);
      const int lo = hex_value(text[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out += static_cast<char>(hi * 16 + lo);
        i += 2;
        continue;
      }
    }
    out += text[i];
  }
  return out;
}

GestureTrace parse_trace(std::string_view document) {
  detail::LineReader reader(document);
  std::string_view line;
  if (!reader.next(line)) throw MalformedDocument("empty document", 0);
  if (line != kHeader) {
    if (line.substr(0, kHeaderPrefix.size()) == kHeaderPrefix)
      throw MalformedDocument("unsupported trace version '" + std::string(line) + "'", 1);
    throw MalformedDocument("missing '#SMAUG-TRACE v1' header", 1);
  }

  GestureTrace trace;
  bool have_meta = false;
  while (reader.next(line)) {
    const auto ln = reader.line_number();
    if (line.empty() || line.front() == '#') continue;
    const auto fields = detail::split_fields(line);
    const auto tag = fields.front();
    if (tag == "META") {
      if (have_meta) throw MalformedDocument("duplicate META record", ln);
      trace.meta = detail::parse_meta_fields(fields, ln);
      have_meta = true;
    } else if (tag == "TOUCH") {
      auto e = detail::parse_touch_fields(fields, ln);
      check_touch_ranges(e, trace.touch.size());
      trace.touch.push_back(e);
    } else if (tag == "GYRO" || tag == "ACCEL") {
      auto& stream = tag == "GYRO" ? trace.gyro : trace.accel;
      const auto e = detail::parse_motion_fields(fields, ln);
      if (e.timeNs < 0) throw SchemaViolation("eventTimeNs", stream.size());
      if (!finite3(e.v)) throw SchemaViolation("v", stream.size());
      stream.push_back(e);
    } else {
      throw MalformedDocument("unknown record tag '" + std::string(tag) + "'", ln);
    }
  }
  if (!have_meta) throw SchemaViolation("META", 0);
  if (trace.touch.empty()) throw SchemaViolation("TOUCH", 0);
  sort_streams(trace);
  return trace;
}

std::string serialize_trace(const GestureTrace& input) {
  GestureTrace trace = input;
  sort_streams(trace);

  std::string out;
  out.reserve(64 + trace.touch.size() * 64 + (trace.gyro.size() + trace.accel.size()) * 72);
  out += kHeader;
  out += '\n';
  out += "META";
  detail::append_meta_fields(out, trace.meta);
  out += '\n';
  for (const auto& e : trace.touch) detail::append_touch(out, e);
  for (const auto& e : trace.gyro) detail::append_motion(out, "GYRO", e);
  for (const auto& e : trace.accel) detail::append_motion(out, "ACCEL", e);
  return out;
}

std::vector<Violation> validate_trace(const GestureTrace& trace) {
  std::vector<Violation> out;
  if (trace.meta.round < 1) out.push_back({"round >= 1", 0});
  if (trace.touch.empty()) out.push_back({"touch non-empty", 0});

  for (std::size_t i = 0; i < trace.touch.size(); ++i) {
    const auto& e = trace.touch[i];
    if (e.timeNs < 0) out.push_back({"touch time nonnegative", i});
    if (i > 0 && e.timeNs < trace.touch[i - 1].timeNs) out.push_back({"touch time order", i});
    if (e.pointerId < 0) out.push_back({"pointerId range", i});
    if (!std::isfinite(e.x) || e.x < 0.0) out.push_back({"x range", i});
    if (!std::isfinite(e.y) || e.y < 0.0) out.push_back({"y range", i});
    if (!(e.pressure >= 0.0 && e.pressure <= 2.0)) out.push_back({"pressure range", i});
    if (!(e.size >= 0.0 && e.size <= 1.0)) out.push_back({"size range", i});
  }

  // Pointer numbers within one identical-timestamp group must be 0..k-1.
  for (std::size_t start = 0; start < trace.touch.size();) {
    std::size_t end = start;
    while (end < trace.touch.size() && trace.touch[end].timeNs == trace.touch[start].timeNs) ++end;
    std::vector<int> numbers;
    for (std::size_t i = start; i < end; ++i) numbers.push_back(trace.touch[i].pointerNumber);
    std::sort(numbers.begin(), numbers.end());
    for (std::size_t k = 0; k < numbers.size(); ++k) {
      if (numbers[k] != static_cast<int>(k)) {
        out.push_back({"pointer numbers contiguous", start});
        break;
      }
    }
    start = end;
  }

  auto check_motion = [&](const std::vector<MotionEvent>& stream, const std::string& name) {
    for (std::size_t i = 0; i < stream.size(); ++i) {
      if (stream[i].timeNs < 0) out.push_back({name + " time nonnegative", i});
      if (i > 0 && stream[i].timeNs < stream[i - 1].timeNs) out.push_back({name + " time order", i});
      if (!finite3(stream[i].v)) out.push_back({name + " finite", i});
    }
  };
  check_motion(trace.gyro, "gyro");
  check_motion(trace.accel, "accel");
  return out;
}

}  // namespace smaug
