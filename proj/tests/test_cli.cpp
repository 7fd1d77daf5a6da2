#include <sstream>

#include <gtest/gtest.h>

#include "cli.hpp"
#include "inspect.hpp"
#include "smaug/store.hpp"
#include "smaug/synth.hpp"
#include "support.hpp"

namespace smaug::tools {
namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "smaug");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  std::string data() const { return (dir_.path() / "db").string(); }
  std::string traces() const { return (dir_.path() / "traces").string(); }
  std::string trace(const std::string& name) const { return (dir_.path() / "traces" / name).string(); }

  std::vector<std::string> enroll_args(int rounds) const {
    std::vector<std::string> a{"--data-dir", data(), "enroll", "--user", "u", "--gesture", "A"};
    for (int r = 1; r <= rounds; ++r) a.push_back(trace("A-r" + std::to_string(r) + ".trace"));
    return a;
  }

  void SetUp() override {
    ASSERT_EQ(run({"gen", "--shape", "A", "--first", "1", "--last", "12", "--out-dir", traces()}).code, kAccept);
    ASSERT_EQ(run({"gen", "--shape", "A", "--impostor", "--first", "1", "--last", "3", "--out-dir", traces()}).code,
              kAccept);
  }

  test::TempDir dir_;
};

TEST_F(CliTest, EnrollVerifyInspect) {
  const auto enrolled = run(enroll_args(10));
  ASSERT_EQ(enrolled.code, kAccept) << enrolled.err;
  EXPECT_NE(enrolled.out.find("enrolled A for u"), std::string::npos);

  const auto ok = run({"--data-dir", data(), "verify", "--user", "u", "--gesture", "A", trace("A-r11.trace")});
  EXPECT_EQ(ok.code, kAccept) << ok.out << ok.err;
  EXPECT_NE(ok.out.find("decision: accept"), std::string::npos);
  EXPECT_EQ(ok.out.find("I~_W"), std::string::npos) << "indicators are debug output";

  const auto bad = run({"--data-dir", data(), "verify", "--user", "u", "--random", trace("A-impostor-r1.trace"),
                        trace("A-impostor-r2.trace"), trace("A-impostor-r3.trace")});
  EXPECT_EQ(bad.code, kReject);
  EXPECT_NE(bad.out.find("decision: reject, fallback required"), std::string::npos);

  const auto csv = run({"--data-dir", data(), "verify", "--user", "u", "--gesture", "A", "--format", "csv", "--debug",
                        trace("A-impostor-r1.trace")});
  EXPECT_EQ(csv.code, kReject);
  EXPECT_EQ(csv.out.rfind("attempt,decision,weighted,faults,theta1,theta2\n1,reject,", 0), 0u) << csv.out;

  const auto inspect = run({"--data-dir", data(), "inspect", "--user", "u", "--gesture", "A"});
  EXPECT_EQ(inspect.code, kAccept);
  TemplateStore store(data());
  EXPECT_EQ(inspect.out, describe_record(store.load("u", "A")));
}

TEST_F(CliTest, WrongRoundCountIsError) {
  const auto r = run(enroll_args(9));
  EXPECT_EQ(r.code, kError);
  EXPECT_NE(r.err.find("expected 10 rounds, got 9"), std::string::npos);
}

TEST_F(CliTest, DuplicateEnrollmentAndUnknownGesture) {
  ASSERT_EQ(run(enroll_args(10)).code, kAccept);
  EXPECT_EQ(run({"--data-dir", data(), "verify", "--user", "u", "--gesture", "B", trace("A-r11.trace")}).code, kError);
  EXPECT_EQ(run({"--data-dir", data(), "verify", "--user", "nobody", "--random", trace("A-r11.trace")}).code, kError);
  EXPECT_EQ(run({"verify", "--user", "u"}).code, kError);
  EXPECT_EQ(run({"bogus"}).code, kError);
}

TEST_F(CliTest, ConfigChangesRoundCount) {
  const auto cfg = (dir_.path() / "c.json").string();
  test::write_text(cfg, R"({"version": 1, "enrollRounds": 9})");
  auto args = enroll_args(9);
  args.insert(args.begin(), {"--config", cfg});
  EXPECT_EQ(run(args).code, kAccept);
}

TEST(Cli, EvaluateWritesParsableCsv) {
  test::TempDir dir;
  const auto out = (dir.path() / "report.csv").string();
  const auto r = run({"--format", "csv", "evaluate", "--shape", "L", "--trials", "3", "--out", out});
  ASSERT_EQ(r.code, kAccept) << r.err;
  const auto text = test::read_text(out);
  EXPECT_EQ(text.rfind("shape,population,metric,key,value\n", 0), 0u);
  EXPECT_NE(text.find("L,all,trials,0,3"), std::string::npos) << text;
}

TEST(Cli, InspectGolden) {
  synth::GenOptions opt;
  opt.touchHz = 30;
  opt.motionHz = 50;
  auto config = default_config();
  config.enrollRounds = 3;
  std::vector<GestureTrace> rounds;
  for (int r = 1; r <= 3; ++r) rounds.push_back(synth::gen_trace(synth::find_shape("L"), synth::default_user_profile(), r, opt));
  test::expect_golden("inspect-L-small.txt", describe_record(enroll("alice", rounds[0].meta, rounds, config, 0)));
}

}  // namespace
}  // namespace smaug::tools
