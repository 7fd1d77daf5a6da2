#include "reply.hpp"

#include <charconv>

#include "smaug/errors.hpp"
#include "smaug/trace.hpp"

namespace smaug::tools {

KeyValues& KeyValues::add(std::string key, std::string value) {
  entries_.emplace_back(std::move(key), std::move(value));
  return *this;
}

KeyValues& KeyValues::add(std::string key, double value) { return add(std::move(key), format_number(value)); }

KeyValues& KeyValues::add(std::string key, long long value) { return add(std::move(key), std::to_string(value)); }

KeyValues& KeyValues::add(std::string key, bool value) {
  return add(std::move(key), std::string(value ? "true" : "false"));
}

std::optional<std::string> KeyValues::get(std::string_view key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  return std::nullopt;
}

std::string KeyValues::render() const {
  std::string out = "#SMAUG-REPLY v1\n";
  for (const auto& [k, v] : entries_) {
    out += k;
    out += '=';
    out += encode_text(v);
    out += '\n';
  }
  return out;
}

KeyValues KeyValues::parse(std::string_view text) {
  KeyValues kv;
  std::size_t lineNo = 0;
  while (!text.empty()) {
    const auto end = text.find('\n');
    auto line = text.substr(0, end);
    text = end == std::string_view::npos ? std::string_view{} : text.substr(end + 1);
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos || eq == 0) throw MalformedDocument("expected key=value", lineNo);
    kv.add(std::string(line.substr(0, eq)), decode_text(line.substr(eq + 1)));
  }
  return kv;
}

std::string format_number(double value) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

}  // namespace smaug::tools
