#pragma once

// Record-level encoders/decoders shared by the trace and template documents.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "smaug/trace.hpp"

namespace smaug::detail {

double require_real(std::string_view token, std::size_t line);
std::int64_t require_int(std::string_view token, std::size_t line);

/// " gestureId=... name=... round=... secret=... bgmode=... bg=..."
void append_meta_fields(std::string& out, const GestureMeta& meta);
/// Parses key=value fields[1..]; throws SchemaViolation for missing keys.
GestureMeta parse_meta_fields(const std::vector<std::string_view>& fields, std::size_t line);

void append_touch(std::string& out, const TouchEvent& e);
void append_motion(std::string& out, std::string_view tag, const MotionEvent& e);
TouchEvent parse_touch_fields(const std::vector<std::string_view>& fields, std::size_t line);
MotionEvent parse_motion_fields(const std::vector<std::string_view>& fields, std::size_t line);

}  // namespace smaug::detail
