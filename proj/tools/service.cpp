#include "service.hpp"

#include <array>
#include <cstdio>

#include <httplib.h>

#include "reply.hpp"
#include "smaug/errors.hpp"
#include "smaug/preprocess.hpp"

namespace smaug::tools {

namespace {

Reply reply(int status, const KeyValues& kv) { return {status, kv.render()}; }

Reply error_reply(int status, std::string_view code, std::string_view message) {
  KeyValues kv;
  kv.add("error", std::string(code)).add("message", std::string(message));
  return reply(status, kv);
}

std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> parts;
  while (!path.empty()) {
    if (path.front() == '/') {
      path.remove_prefix(1);
      continue;
    }
    const auto end = path.find('/');
    parts.push_back(path.substr(0, end));
    path = end == std::string_view::npos ? std::string_view{} : path.substr(end);
  }
  return parts;
}

std::optional<bool> parse_flag(const std::optional<std::string>& v) {
  if (!v) return std::nullopt;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw MalformedDocument("expected a boolean, got '" + *v + "'", 0);
}

// Parses, validates and preprocesses a posted trace. Fills `error` and
// returns nothing when the trace is unusable.
std::optional<std::pair<GestureTrace, int>> accept_trace(std::string_view body,
                                                         const PreprocessParams& params,
                                                         Reply& error) {
  GestureTrace trace;
  try {
    trace = parse_trace(body);
  } catch (const SchemaViolation& e) {
    KeyValues kv;
    kv.add("error", "schema").add("message", e.what()).add("field", e.field()).add("record", static_cast<long long>(e.record()));
    error = reply(400, kv);
    return std::nullopt;
  } catch (const MalformedDocument& e) {
    KeyValues kv;
    kv.add("error", "malformed").add("message", e.what()).add("line", static_cast<long long>(e.line()));
    error = reply(400, kv);
    return std::nullopt;
  }
  if (const auto violations = validate_trace(trace); !violations.empty()) {
    KeyValues kv;
    kv.add("error", "invalid-trace").add("message", "trace breaks " + std::to_string(violations.size()) + " invariant(s)");
    for (const auto& v : violations) kv.add("violation", v.invariant + "@" + std::to_string(v.index));
    error = reply(400, kv);
    return std::nullopt;
  }
  try {
    const auto processed = preprocess(trace, params);
    return std::pair{std::move(trace), static_cast<int>(processed.touch.strokes.size())};
  } catch (const Error& e) {
    error = error_reply(400, "unusable-trace", e.what());
    return std::nullopt;
  }
}

}  // namespace

Service::Service(TemplateStore& store, ServiceOptions options)
    : store_(store), options_(std::move(options)), rng_(options_.seed != 0 ? options_.seed : std::random_device{}()) {}

Clock::time_point Service::now() const { return options_.now ? options_.now() : Clock::now(); }

std::size_t Service::session_count() {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

void Service::expire_sessions() {
  const auto idle = std::chrono::duration<double>(options_.config.sessionIdleSeconds);
  const auto t = now();
  std::lock_guard lock(mutex_);
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    std::unique_lock sessionLock(it->second->mutex, std::try_to_lock);
    // A session busy in another request is in use and therefore not idle.
    if (sessionLock.owns_lock() && t - it->second->lastActive > idle)
      it = sessions_.erase(it);
    else
      ++it;
  }
}

std::shared_ptr<Service::Session> Service::find_session(const std::string& id) {
  std::lock_guard lock(mutex_);
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::string Service::new_session_id() {
  std::uint64_t a = 0, b = 0;
  {
    std::lock_guard lock(mutex_);
    a = rng_();
    b = rng_();
  }
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(a), static_cast<unsigned long long>(b));
  return buf;
}

Reply Service::handle(std::string_view method, std::string_view path, std::string_view body) {
  expire_sessions();
  const auto parts = split_path(path);
  try {
    if (method == "POST" && parts.size() == 1 && parts[0] == "sessions") return create_session(body);
    if (method == "POST" && parts.size() == 3 && parts[0] == "sessions" && (parts[2] == "rounds" || parts[2] == "attempts")) {
      const std::string id(parts[1]);
      const auto session = find_session(id);
      if (!session) return error_reply(404, "unknown-session", "no session '" + id + "'");
      std::lock_guard lock(session->mutex);
      session->lastActive = now();
      return parts[2] == "rounds" ? post_round(*session, id, body) : post_attempt(*session, id, body);
    }
    if (method == "GET" && parts.size() == 3 && parts[0] == "users" && parts[2] == "gestures")
      return list_gestures(std::string(parts[1]));
  } catch (const MalformedDocument& e) {
    return error_reply(400, "malformed", e.what());
  } catch (const NotFound& e) {
    return error_reply(404, "not-found", e.what());
  } catch (const Error& e) {
    return error_reply(500, "internal", e.what());
  }
  return error_reply(404, "no-route", std::string(method) + " " + std::string(path));
}

Reply Service::create_session(std::string_view body) {
  const auto req = KeyValues::parse(body);
  const auto user = req.get("user");
  const auto mode = req.get("mode");
  if (!user || user->empty()) return error_reply(400, "bad-request", "missing 'user'");
  if (!mode || (*mode != "enroll" && *mode != "verify")) return error_reply(400, "bad-request", "'mode' must be enroll or verify");

  auto session = std::make_shared<Session>();
  session->user = *user;
  session->lastActive = now();
  KeyValues out;

  if (*mode == "enroll") {
    const auto name = req.get("gestureName");
    if (!name || name->empty()) return error_reply(400, "bad-request", "missing 'gestureName'");
    session->meta.name = *name;
    session->meta.gestureId = req.get("gestureId").value_or(*name);
    session->meta.secretMode = parse_flag(req.get("secret")).value_or(options_.config.secretMode);
    session->meta.backgroundImageMode = parse_flag(req.get("bgmode")).value_or(false);
    if (const auto bg = req.get("bg")) session->meta.backgroundImage = *bg;
    if (store_.contains(*user, session->meta.gestureId))
      return error_reply(409, "exists", "gesture '" + session->meta.gestureId + "' is already enrolled");
    session->phase = Phase::Enroll;
  } else {
    std::string gestureId;
    if (const auto g = req.get("gestureId")) {
      gestureId = *g;
    } else {
      const auto registry = store_.list(*user);
      if (registry.empty()) return error_reply(404, "unknown-user", "user '" + *user + "' has no gestures");
      std::lock_guard lock(mutex_);
      gestureId = select_gesture(registry, rng_).gestureId;
    }
    if (!store_.contains(*user, gestureId))
      return error_reply(404, "unknown-gesture", "user '" + *user + "' has no gesture '" + gestureId + "'");
    session->record = store_.load(*user, gestureId);
    session->meta = session->record->tmpl.meta;
    session->phase = Phase::Verify;
  }

  const auto id = new_session_id();
  {
    std::lock_guard lock(mutex_);
    sessions_[id] = session;
  }
  out.add("sessionId", id).add("phase", *mode).add("gestureId", session->meta.gestureId);
  if (!session->meta.secretMode) out.add("prompt", session->meta.name);
  if (session->meta.backgroundImageMode && session->meta.backgroundImage) out.add("backgroundImage", *session->meta.backgroundImage);
  if (*mode == "enroll")
    out.add("roundsRequired", options_.config.enrollRounds);
  else
    out.add("attemptsAllowed", session->record->extraAttempts + 1);
  return reply(201, out);
}

Reply Service::post_round(Session& session, const std::string& id, std::string_view body) {
  if (session.phase != Phase::Enroll) return error_reply(409, "wrong-phase", "session '" + id + "' does not accept rounds");
  Reply error;
  auto accepted = accept_trace(body, options_.config.preprocess, error);
  if (!accepted) return error;
  auto& [trace, strokes] = *accepted;
  if (session.strokes && *session.strokes != strokes)
    return error_reply(400, "stroke-count", "round has " + std::to_string(strokes) + " strokes, earlier rounds have " +
                                                std::to_string(*session.strokes));
  session.strokes = strokes;
  trace.meta = session.meta;
  trace.meta.round = static_cast<int>(session.rounds.size()) + 1;
  session.rounds.push_back(std::move(trace));

  KeyValues out;
  const int done = static_cast<int>(session.rounds.size());
  out.add("roundsDone", done).add("roundsRequired", options_.config.enrollRounds);
  if (done < options_.config.enrollRounds) {
    out.add("enrollment", "in-progress");
    return reply(200, out);
  }

  const auto createdAt = std::chrono::duration_cast<std::chrono::seconds>(
                             std::chrono::system_clock::now().time_since_epoch()).count();
  const auto record = enroll(session.user, session.meta, session.rounds, options_.config, createdAt);
  store_.save(record);
  session.phase = Phase::Done;
  session.rounds.clear();
  out.add("enrollment", "complete").add("gestureId", record.gesture_id());
  if (options_.debug) {
    out.add("I_F", record.weights.faultIndicator).add("I_W", record.weights.weightIndicator);
    out.add("theta1", record.thresholds.weight).add("theta2", record.thresholds.fault);
  }
  return reply(200, out);
}

Reply Service::post_attempt(Session& session, const std::string& id, std::string_view body) {
  if (session.phase != Phase::Verify) return error_reply(409, "wrong-phase", "session '" + id + "' does not accept attempts");
  Reply error;
  auto accepted = accept_trace(body, session.record->preprocess, error);
  if (!accepted) return error;
  const auto result = verify_attempt(accepted->first, *session.record);
  ++session.attemptsDone;
  const int allowed = session.record->extraAttempts + 1;
  const bool exhausted = !result.decision && session.attemptsDone >= allowed;
  if (result.decision || exhausted) session.phase = Phase::Done;

  KeyValues out;
  out.add("decision", result.decision ? "accept" : "reject")
      .add("attempt", session.attemptsDone)
      .add("attemptsRemaining", result.decision ? 0 : allowed - session.attemptsDone)
      .add("fallbackRequired", exhausted);
  if (options_.debug) {
    out.add("I~_W", result.weighted).add("I~_F", result.faults);
    out.add("theta1", result.thresholds.weight).add("theta2", result.thresholds.fault);
    std::array<int, 7> byCategory{};
    for (const auto& f : result.detail) ++byCategory[static_cast<std::size_t>(check_category(f.key.kind) - 1)];
    for (std::size_t c = 0; c < byCategory.size(); ++c) out.add("faults." + std::to_string(c + 1), byCategory[c]);
  }
  return reply(200, out);
}

Reply Service::list_gestures(const std::string& user) {
  const auto registry = store_.list(user);
  if (registry.empty()) return error_reply(404, "unknown-user", "user '" + user + "' has no gestures");
  KeyValues out;
  out.add("user", user).add("count", static_cast<long long>(registry.size()));
  for (std::size_t i = 0; i < registry.size(); ++i) {
    const auto prefix = "gesture." + std::to_string(i) + ".";
    out.add(prefix + "id", registry[i].gestureId);
    out.add(prefix + "secret", registry[i].secretMode);
    if (!registry[i].secretMode) out.add(prefix + "name", registry[i].name);
  }
  return reply(200, out);
}

void Service::mount(httplib::Server& server) {
  auto route = [this](const httplib::Request& req, httplib::Response& res) {
    const auto r = handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body, "text/plain");
  };
  server.Get(".*", route);
  server.Post(".*", route);
}

}  // namespace smaug::tools
