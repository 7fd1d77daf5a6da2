#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>

#include "reply.hpp"
#include "service.hpp"
#include "smaug/synth.hpp"
#include "support.hpp"

namespace smaug::tools {
namespace {

std::string trace_doc(const std::string& shape, int round) {
  return serialize_trace(synth::gen_trace(synth::find_shape(shape), synth::default_user_profile(), round));
}

std::string impostor_doc(const std::string& shape, int round) {
  return serialize_trace(synth::gen_impostor_trace(synth::find_shape(shape), synth::default_user_profile(),
                                                   synth::default_impostor_profile(), round));
}

class ServiceTest : public ::testing::Test {
 protected:
  ServiceTest() : store_(dir_.path()) {}

  Service make(bool debug = false) {
    ServiceOptions o;
    o.debug = debug;
    o.seed = 42;
    o.now = [this] { return clock_; };
    return Service(store_, o);
  }

  static KeyValues body(const Reply& r) { return KeyValues::parse(r.body); }

  static std::string session(Service& s, const std::string& request) {
    const auto r = s.handle("POST", "/sessions", request);
    EXPECT_EQ(r.status, 201) << r.body;
    return *body(r).get("sessionId");
  }

  void enroll_bar(Service& s) {
    const auto id = session(s, "user=ann\nmode=enroll\ngestureName=Bar\ngestureId=bar\nsecret=false\n");
    for (int r = 1; r <= 10; ++r) {
      const auto reply = s.handle("POST", "/sessions/" + id + "/rounds", trace_doc("Bar", r));
      ASSERT_EQ(reply.status, 200) << reply.body;
    }
  }

  test::TempDir dir_;
  TemplateStore store_;
  Clock::time_point clock_{};
};

TEST_F(ServiceTest, EnrollmentFlow) {
  auto s = make(true);
  const auto created = s.handle("POST", "/sessions", "user=ann\nmode=enroll\ngestureName=Bar\ngestureId=bar\nsecret=false\n");
  ASSERT_EQ(created.status, 201);
  const auto kv = body(created);
  EXPECT_EQ(created.body.rfind("#SMAUG-REPLY v1\n", 0), 0u);
  EXPECT_EQ(kv.get("sessionId")->size(), 32u);
  EXPECT_EQ(*kv.get("phase"), "enroll");
  EXPECT_EQ(*kv.get("prompt"), "Bar");
  EXPECT_EQ(*kv.get("roundsRequired"), "10");
  const auto id = *kv.get("sessionId");
  for (int r = 1; r <= 10; ++r) {
    const auto reply = body(s.handle("POST", "/sessions/" + id + "/rounds", trace_doc("Bar", r)));
    EXPECT_EQ(*reply.get("roundsDone"), std::to_string(r));
    EXPECT_EQ(*reply.get("enrollment"), r < 10 ? "in-progress" : "complete");
    if (r == 10) {
      EXPECT_TRUE(reply.get("theta1"));
      EXPECT_TRUE(reply.get("I_F"));
    }
  }
  EXPECT_TRUE(store_.contains("ann", "bar"));
  EXPECT_EQ(s.handle("POST", "/sessions/" + id + "/rounds", trace_doc("Bar", 11)).status, 409);
  EXPECT_EQ(s.handle("POST", "/sessions", "user=ann\nmode=enroll\ngestureName=Bar\ngestureId=bar\n").status, 409);
}

TEST_F(ServiceTest, VerificationAcceptsGenuineAndFallsBackForImpostor) {
  auto s = make(true);
  enroll_bar(s);

  const auto genuine = session(s, "user=ann\nmode=verify\ngestureId=bar\n");
  const auto ok = body(s.handle("POST", "/sessions/" + genuine + "/attempts", trace_doc("Bar", 11)));
  EXPECT_EQ(*ok.get("decision"), "accept");
  EXPECT_EQ(*ok.get("attemptsRemaining"), "0");
  EXPECT_EQ(*ok.get("fallbackRequired"), "false");
  EXPECT_TRUE(ok.get("I~_W"));
  EXPECT_TRUE(ok.get("faults.1"));
  EXPECT_EQ(s.handle("POST", "/sessions/" + genuine + "/attempts", trace_doc("Bar", 12)).status, 409);

  const auto impostor = session(s, "user=ann\nmode=verify\n");
  for (int t = 1; t <= 3; ++t) {
    const auto r = body(s.handle("POST", "/sessions/" + impostor + "/attempts", impostor_doc("Bar", t)));
    EXPECT_EQ(*r.get("decision"), "reject");
    EXPECT_EQ(*r.get("attempt"), std::to_string(t));
    EXPECT_EQ(*r.get("attemptsRemaining"), std::to_string(3 - t));
    EXPECT_EQ(*r.get("fallbackRequired"), t == 3 ? "true" : "false");
  }
  EXPECT_EQ(s.handle("POST", "/sessions/" + impostor + "/attempts", trace_doc("Bar", 13)).status, 409);
}

TEST_F(ServiceTest, IndicatorsHiddenWithoutDebug) {
  {
    auto s = make(false);
    enroll_bar(s);
  }
  auto s = make(false);
  const auto id = session(s, "user=ann\nmode=verify\ngestureId=bar\n");
  const auto r = body(s.handle("POST", "/sessions/" + id + "/attempts", trace_doc("Bar", 11)));
  EXPECT_TRUE(r.get("decision"));
  EXPECT_FALSE(r.get("I~_W"));
  EXPECT_FALSE(r.get("theta1"));
}

TEST_F(ServiceTest, ErrorReplies) {
  auto s = make();
  const auto id = session(s, "user=ann\nmode=enroll\ngestureName=Bar\n");

  auto doc = trace_doc("Bar", 1);
  const auto pos = doc.find("TOUCH ");
  const auto line_end = doc.find('\n', pos);
  auto line = doc.substr(pos, line_end - pos);
  // Replace the pressure field (second to last) with 3.
  const auto last = line.rfind(' ');
  const auto before = line.rfind(' ', last - 1);
  line = line.substr(0, before) + " 3" + line.substr(last);
  doc.replace(pos, line_end - pos, line);
  const auto schema = s.handle("POST", "/sessions/" + id + "/rounds", doc);
  EXPECT_EQ(schema.status, 400);
  EXPECT_EQ(*body(schema).get("error"), "schema");
  EXPECT_EQ(*body(schema).get("field"), "pressure");

  const auto malformed = s.handle("POST", "/sessions/" + id + "/rounds", "#SMAUG-TRACE v1\nnonsense\n");
  EXPECT_EQ(malformed.status, 400);
  EXPECT_EQ(*body(malformed).get("error"), "malformed");

  auto unordered = synth::gen_trace(synth::find_shape("Bar"), synth::default_user_profile(), 1);
  unordered.touch.back().action = TouchAction::Down;
  const auto unusable = s.handle("POST", "/sessions/" + id + "/rounds", serialize_trace(unordered));
  EXPECT_EQ(unusable.status, 400);
  EXPECT_EQ(*body(unusable).get("error"), "unusable-trace");

  ASSERT_EQ(s.handle("POST", "/sessions/" + id + "/rounds", trace_doc("Bar", 1)).status, 200);
  const auto mismatch = s.handle("POST", "/sessions/" + id + "/rounds", trace_doc("L", 2));
  EXPECT_EQ(mismatch.status, 400);
  EXPECT_EQ(*body(mismatch).get("error"), "stroke-count");

  EXPECT_EQ(s.handle("POST", "/sessions/" + id + "/attempts", trace_doc("Bar", 2)).status, 409);
  EXPECT_EQ(s.handle("POST", "/sessions/deadbeef/rounds", trace_doc("Bar", 2)).status, 404);
  EXPECT_EQ(s.handle("POST", "/sessions", "user=zed\nmode=verify\n").status, 404);
  EXPECT_EQ(s.handle("POST", "/sessions", "user=zed\nmode=dance\n").status, 400);
  EXPECT_EQ(s.handle("POST", "/sessions", "garbage").status, 400);
  EXPECT_EQ(s.handle("GET", "/users/zed/gestures", "").status, 404);
  EXPECT_EQ(s.handle("DELETE", "/sessions", "").status, 404);
}

TEST_F(ServiceTest, GestureListingHonoursSecretMode) {
  auto s = make();
  enroll_bar(s);
  const auto hidden = session(s, "user=ann\nmode=enroll\ngestureName=Zed\ngestureId=z\nsecret=true\n");
  for (int r = 1; r <= 10; ++r) s.handle("POST", "/sessions/" + hidden + "/rounds", trace_doc("Z", r));
  const auto list = body(s.handle("GET", "/users/ann/gestures", ""));
  EXPECT_EQ(*list.get("count"), "2");
  EXPECT_EQ(*list.get("gesture.0.id"), "bar");
  EXPECT_EQ(*list.get("gesture.0.name"), "Bar");
  EXPECT_EQ(*list.get("gesture.1.secret"), "true");
  EXPECT_FALSE(list.get("gesture.1.name"));

  const auto v = body(s.handle("POST", "/sessions", "user=ann\nmode=verify\ngestureId=z\n"));
  EXPECT_FALSE(v.get("prompt"));
  EXPECT_EQ(*v.get("attemptsAllowed"), "3");
}

TEST_F(ServiceTest, IdleSessionsExpire) {
  auto s = make();
  const auto id = session(s, "user=ann\nmode=enroll\ngestureName=Bar\n");
  EXPECT_EQ(s.session_count(), 1u);
  clock_ += std::chrono::seconds(599);
  EXPECT_EQ(s.handle("POST", "/sessions/" + id + "/rounds", trace_doc("Bar", 1)).status, 200);
  clock_ += std::chrono::seconds(601);
  EXPECT_EQ(s.handle("POST", "/sessions/" + id + "/rounds", trace_doc("Bar", 2)).status, 404);
  EXPECT_EQ(s.session_count(), 0u);
}

TEST_F(ServiceTest, ServesOverHttp) {
  auto s = make();
  httplib::Server server;
  s.mount(server);
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto created = client.Post("/sessions", "user=web\nmode=enroll\ngestureName=L\n", "text/plain");
  ASSERT_TRUE(created);
  EXPECT_EQ(created->status, 201);
  const auto id = *KeyValues::parse(created->body).get("sessionId");
  for (int r = 1; r <= 10; ++r) {
    auto reply = client.Post("/sessions/" + id + "/rounds", trace_doc("L", r), "text/plain");
    ASSERT_TRUE(reply);
    EXPECT_EQ(reply->status, 200);
  }
  auto list = client.Get("/users/web/gestures");
  ASSERT_TRUE(list);
  EXPECT_EQ(list->status, 200);
  EXPECT_EQ(*KeyValues::parse(list->body).get("gesture.0.id"), "L");

  auto v = client.Post("/sessions", "user=web\nmode=verify\ngestureId=L\n", "text/plain");
  const auto vid = *KeyValues::parse(v->body).get("sessionId");
  auto attempt = client.Post("/sessions/" + vid + "/attempts", trace_doc("L", 11), "text/plain");
  ASSERT_TRUE(attempt);
  EXPECT_EQ(*KeyValues::parse(attempt->body).get("decision"), "accept");
  EXPECT_EQ(client.Get("/nowhere")->status, 404);

  server.stop();
  worker.join();
}

TEST(Reply, RenderAndParse) {
  KeyValues kv;
  kv.add("a", "x y").add("n", 1.5).add("i", 3).add("b", true);
  const auto text = kv.render();
  EXPECT_EQ(text, "#SMAUG-REPLY v1\na=x%20y\nn=1.5\ni=3\nb=true\n");
  const auto back = KeyValues::parse(text);
  EXPECT_EQ(back.entries(), kv.entries());
  EXPECT_EQ(*back.get("a"), "x y");
  EXPECT_FALSE(back.get("z"));
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(20.4), "20.4");
}

}  // namespace
}  // namespace smaug::tools
