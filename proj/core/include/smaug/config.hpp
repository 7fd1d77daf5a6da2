#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "smaug/preprocess.hpp"
#include "smaug/weights.hpp"

namespace smaug {

/// System and security parameters. Serialized as a versioned JSON document:
///
///   {
///     "version": 1,
///     "profile": "default" | "experiment",   // base values, optional
///     "enrollRounds": 10, "extraAttempts": 2,
///     "tiers": {"one": 0.75, "two": 1, "three": 2},
///     "offsetStartMs": 150, "offsetEndMs": 100, "fusionWindowMs": 10,
///     "secretMode": true, "sessionIdleSeconds": 600,
///     "security": {"bgSingle": {"weightMul": 2.5, "weightAdd": 6, "faultMul": 1.9, "faultAdd": 6}, ...},
///     "tierRules": [{"prefix": "stroke/", "tier": 2}, ...],     // replaces the defaults
///     "tierOverrides": [{"prefix": "gyro/o0.", "tier": 2}, ...]  // appended to the rules
///   }
///
/// Every key except "version" is optional.
struct SystemConfig {
  int enrollRounds = 10;   // P_E
  int extraAttempts = 2;   // P_V
  TierValues tiers;        // P_T1..P_T3
  PreprocessParams preprocess;
  bool secretMode = true;
  double sessionIdleSeconds = 600.0;
  SecurityTable security;
  std::vector<TierRule> tierRules = default_tier_rules();

  friend bool operator==(const SystemConfig&, const SystemConfig&) = default;
};

inline constexpr int kConfigVersion = 1;

SystemConfig default_config();

/// Same as the default but with tier multipliers 0.5 / 2 / 4.
SystemConfig experiment_config();

/// Throws MalformedDocument on invalid JSON or bad field types,
/// VersionMismatch on an unknown version.
SystemConfig parse_config(std::string_view json);
std::string serialize_config(const SystemConfig& config);
SystemConfig load_config(const std::filesystem::path& path);

}  // namespace smaug
