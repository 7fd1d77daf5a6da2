#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace smaug::tools {

/// Line-oriented key/value document used for service requests and replies:
///
///   #SMAUG-REPLY v1          (replies only; optional in requests)
///   key=value
///
/// Values are percent-encoded like trace text fields. Keys keep their order
/// and may repeat.
class KeyValues {
 public:
  KeyValues& add(std::string key, std::string value);
  KeyValues& add(std::string key, double value);
  KeyValues& add(std::string key, long long value);
  KeyValues& add(std::string key, int value) { return add(std::move(key), static_cast<long long>(value)); }
  KeyValues& add(std::string key, bool value);
  KeyValues& add(std::string key, const char* value) { return add(std::move(key), std::string(value)); }

  /// First value stored under `key`.
  std::optional<std::string> get(std::string_view key) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }

  std::string render() const;

  /// Skips blank lines and '#' lines (including the header). Throws
  /// MalformedDocument on a line without '='.
  static KeyValues parse(std::string_view text);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Shortest decimal that reads back to the same double.
std::string format_number(double value);

}  // namespace smaug::tools
