#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "smaug/authflow.hpp"
#include "smaug/store.hpp"

namespace httplib {
class Server;
}

namespace smaug::tools {

using Clock = std::chrono::steady_clock;

struct ServiceOptions {
  SystemConfig config = default_config();
  bool debug = false;           // expose indicators and thresholds in replies
  std::uint64_t seed = 0;       // session ids and random gesture choice; 0 = nondeterministic
  std::function<Clock::time_point()> now;  // defaults to Clock::now
};

struct Reply {
  int status = 200;
  std::string body;
};

/// Enrollment and verification sessions over a template store. Every route
/// is served by `handle`, so the HTTP binding in `mount` is a thin adapter.
/// Request and reply bodies are described in docs/service.md.
class Service {
 public:
  Service(TemplateStore& store, ServiceOptions options);

  Reply handle(std::string_view method, std::string_view path, std::string_view body);

  /// Routes every request of `server` to `handle`.
  void mount(httplib::Server& server);

  std::size_t session_count();

 private:
  enum class Phase { Enroll, Verify, Done };

  struct Session {
    std::mutex mutex;
    std::string user;
    GestureMeta meta;
    Phase phase = Phase::Enroll;
    std::vector<GestureTrace> rounds;
    std::optional<int> strokes;  // stroke count of the first accepted round
    std::optional<EnrollmentRecord> record;
    int attemptsDone = 0;
    Clock::time_point lastActive;
  };

  Reply create_session(std::string_view body);
  Reply post_round(Session& session, const std::string& id, std::string_view body);
  Reply post_attempt(Session& session, const std::string& id, std::string_view body);
  Reply list_gestures(const std::string& user);

  std::shared_ptr<Session> find_session(const std::string& id);
  void expire_sessions();
  std::string new_session_id();
  Clock::time_point now() const;

  TemplateStore& store_;
  ServiceOptions options_;
  std::mutex mutex_;  // guards sessions_ and rng_
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::mt19937_64 rng_;
};

}  // namespace smaug::tools
