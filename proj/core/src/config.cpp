#include "smaug/config.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "smaug/errors.hpp"

namespace smaug {

namespace {

using nlohmann::json;

constexpr std::pair<const char*, SecurityParams SecurityTable::*> kModes[] = {
    {"bgSingle", &SecurityTable::bgSingle},
    {"bgMulti", &SecurityTable::bgMulti},
    {"plainSingle", &SecurityTable::plainSingle},
    {"plainMulti", &SecurityTable::plainMulti},
};

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (const auto it = j.find(key); it != j.end()) out = it->get<T>();
}

Tier parse_tier(const json& j) {
  const int t = j.get<int>();
  if (t < 1 || t > 3) throw MalformedDocument("tier must be 1, 2 or 3", 0);
  return static_cast<Tier>(t);
}

std::vector<TierRule> read_rules(const json& j) {
  std::vector<TierRule> rules;
  for (const auto& r : j) rules.push_back({r.at("prefix").get<std::string>(), parse_tier(r.at("tier"))});
  return rules;
}

json write_rules(const std::vector<TierRule>& rules) {
  json out = json::array();
  for (const auto& r : rules) out.push_back({{"prefix", r.prefix}, {"tier", static_cast<int>(r.tier)}});
  return out;
}

}  // namespace

SystemConfig default_config() { return {}; }

SystemConfig experiment_config() {
  SystemConfig c;
  c.tiers = {0.5, 2.0, 4.0};
  return c;
}

SystemConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw MalformedDocument(e.what(), 0);
  }
  if (!j.is_object()) throw MalformedDocument("configuration must be a JSON object", 0);
  const auto version = j.find("version");
  if (version == j.end() || !version->is_number_integer())
    throw MalformedDocument("configuration lacks an integer version", 0);
  if (version->get<int>() != kConfigVersion)
    throw VersionMismatch("unsupported configuration version " + std::to_string(version->get<int>()));

  try {
    SystemConfig c = default_config();
    if (const auto p = j.find("profile"); p != j.end()) {
      const auto name = p->get<std::string>();
      if (name == "experiment") c = experiment_config();
      else if (name != "default") throw MalformedDocument("unknown profile '" + name + "'", 0);
    }
    read(j, "enrollRounds", c.enrollRounds);
    read(j, "extraAttempts", c.extraAttempts);
    if (c.enrollRounds < 2) throw MalformedDocument("enrollRounds must be at least 2", 0);
    if (c.extraAttempts < 0) throw MalformedDocument("extraAttempts must be nonnegative", 0);
    if (const auto t = j.find("tiers"); t != j.end()) {
      read(*t, "one", c.tiers.one);
      read(*t, "two", c.tiers.two);
      read(*t, "three", c.tiers.three);
    }
    read(j, "offsetStartMs", c.preprocess.offsetStartMs);
    read(j, "offsetEndMs", c.preprocess.offsetEndMs);
    read(j, "fusionWindowMs", c.preprocess.fusionWindowMs);
    read(j, "secretMode", c.secretMode);
    read(j, "sessionIdleSeconds", c.sessionIdleSeconds);
    if (const auto s = j.find("security"); s != j.end()) {
      for (const auto& [name, member] : kModes) {
        const auto m = s->find(name);
        if (m == s->end()) continue;
        auto& p = c.security.*member;
        read(*m, "weightMul", p.weightMul);
        read(*m, "weightAdd", p.weightAdd);
        read(*m, "faultMul", p.faultMul);
        read(*m, "faultAdd", p.faultAdd);
      }
    }
    if (const auto r = j.find("tierRules"); r != j.end()) c.tierRules = read_rules(*r);
    if (const auto r = j.find("tierOverrides"); r != j.end()) {
      const auto extra = read_rules(*r);
      c.tierRules.insert(c.tierRules.end(), extra.begin(), extra.end());
    }
    return c;
  } catch (const json::exception& e) {
    throw MalformedDocument(e.what(), 0);
  }
}

std::string serialize_config(const SystemConfig& c) {
  json j;
  j["version"] = kConfigVersion;
  j["enrollRounds"] = c.enrollRounds;
  j["extraAttempts"] = c.extraAttempts;
  j["tiers"] = {{"one", c.tiers.one}, {"two", c.tiers.two}, {"three", c.tiers.three}};
  j["offsetStartMs"] = c.preprocess.offsetStartMs;
  j["offsetEndMs"] = c.preprocess.offsetEndMs;
  j["fusionWindowMs"] = c.preprocess.fusionWindowMs;
  j["secretMode"] = c.secretMode;
  j["sessionIdleSeconds"] = c.sessionIdleSeconds;
  json sec;
  for (const auto& [name, member] : kModes) {
    const auto& p = c.security.*member;
    sec[name] = {{"weightMul", p.weightMul}, {"weightAdd", p.weightAdd}, {"faultMul", p.faultMul}, {"faultAdd", p.faultAdd}};
  }
  j["security"] = sec;
  j["tierRules"] = write_rules(c.tierRules);
  return j.dump(2) + "\n";
}

SystemConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound("cannot open configuration " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace smaug
