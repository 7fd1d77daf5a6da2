#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <httplib.h>

#include "inspect.hpp"
#include "reply.hpp"
#include "service.hpp"
#include "smaug/errors.hpp"
#include "smaug/store.hpp"
#include "smaug/synth.hpp"

namespace smaug::tools {

namespace {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

struct Globals {
  std::string configPath;
  std::string dataDir;
  std::string format = "text";
  bool debug = false;
  std::uint64_t seed = 0;
};

SystemConfig load(const Globals& g) { return g.configPath.empty() ? default_config() : load_config(g.configPath); }

fs::path data_root(const Globals& g) {
  if (!g.dataDir.empty()) return g.dataDir;
  if (const char* env = std::getenv("SMAUG_DATA_DIR"); env && *env) return env;
  return "smaug-data";
}

std::vector<synth::GestureShape> shapes_for(const std::vector<std::string>& names, const std::string& shapesFile) {
  std::vector<synth::GestureShape> custom;
  if (!shapesFile.empty()) custom = synth::parse_shapes(read_file(shapesFile));
  std::vector<synth::GestureShape> out;
  for (const auto& n : names) {
    const auto it = std::find_if(custom.begin(), custom.end(), [&](const auto& s) { return s.name == n; });
    out.push_back(it != custom.end() ? *it : synth::find_shape(n));
  }
  if (names.empty()) out = custom;
  return out;
}

std::pair<synth::UserProfile, synth::ImpostorProfile> profiles_for(const std::string& file, std::uint64_t seed) {
  auto profiles = file.empty() ? std::pair{synth::default_user_profile(), synth::default_impostor_profile()}
                               : synth::parse_profiles(read_file(file));
  if (seed != 0) {
    profiles.first.seed = seed;
    profiles.second.base.seed = seed + 7776;
  }
  return profiles;
}

std::vector<GestureTrace> read_traces(const std::vector<std::string>& files) {
  std::vector<GestureTrace> traces;
  for (const auto& f : files) {
    try {
      traces.push_back(parse_trace(read_file(f)));
    } catch (const Error& e) {
      throw Error(f + ": " + e.what());
    }
  }
  return traces;
}

int cmd_enroll(const Globals& g,
               const std::string& user,
               const std::string& name,
               std::string gestureId,
               const std::optional<bool>& secret,
               bool bgMode,
               const std::string& bg,
               const std::vector<std::string>& files,
               std::ostream& out) {
  const auto config = load(g);
  if (files.size() != static_cast<std::size_t>(config.enrollRounds))
    throw InsufficientRounds(static_cast<std::size_t>(config.enrollRounds), files.size());
  const auto traces = read_traces(files);
  GestureMeta meta;
  meta.name = name;
  meta.gestureId = gestureId.empty() ? name : std::move(gestureId);
  meta.secretMode = secret.value_or(config.secretMode);
  meta.backgroundImageMode = bgMode;
  if (!bg.empty()) meta.backgroundImage = bg;
  TemplateStore store(data_root(g));
  if (store.contains(user, meta.gestureId)) throw Error("gesture '" + meta.gestureId + "' of '" + user + "' is already enrolled");
  const auto createdAt = std::chrono::duration_cast<std::chrono::seconds>(
                             std::chrono::system_clock::now().time_since_epoch()).count();
  const auto record = enroll(user, meta, traces, config, createdAt);
  const auto path = store.save(record);
  out << "enrolled " << meta.gestureId << " for " << user << ": " << path.string() << '\n';
  if (g.debug)
    out << "I_F=" << format_number(record.weights.faultIndicator) << " I_W=" << format_number(record.weights.weightIndicator)
        << " theta1=" << format_number(record.thresholds.weight) << " theta2=" << format_number(record.thresholds.fault) << '\n';
  return kAccept;
}

int cmd_verify(const Globals& g,
               const std::string& user,
               std::string gestureId,
               bool random,
               const std::vector<std::string>& files,
               std::ostream& out) {
  TemplateStore store(data_root(g));
  if (random) {
    std::mt19937_64 rng(g.seed);
    const auto registry = store.list(user);
    const auto choice = select_gesture(registry, rng);
    gestureId = choice.gestureId;
    out << "gesture: " << gestureId;
    if (choice.displayName) out << " (" << *choice.displayName << ")";
    out << '\n';
  } else if (gestureId.empty()) {
    throw Error("verify needs --gesture or --random");
  }
  const auto record = store.load(user, gestureId);
  const auto allowed = static_cast<std::size_t>(record.extraAttempts + 1);
  if (files.empty() || files.size() > allowed)
    throw Error("expected 1 to " + std::to_string(allowed) + " attempt traces, got " + std::to_string(files.size()));
  const auto traces = read_traces(files);

  const bool csv = g.format == "csv";
  if (csv) out << (g.debug ? "attempt,decision,weighted,faults,theta1,theta2\n" : "attempt,decision\n");
  const auto outcome = verify_session(record, [&](int t) -> std::optional<GestureTrace> {
    if (static_cast<std::size_t>(t) > traces.size()) return std::nullopt;
    return traces[static_cast<std::size_t>(t - 1)];
  }, record.extraAttempts);
  for (std::size_t i = 0; i < outcome.attempts.size(); ++i) {
    const auto& a = outcome.attempts[i];
    const char* d = a.decision ? "accept" : "reject";
    if (csv) {
      out << i + 1 << ',' << d;
      if (g.debug)
        out << ',' << format_number(a.weighted) << ',' << format_number(a.faults) << ','
            << format_number(a.thresholds.weight) << ',' << format_number(a.thresholds.fault);
      out << '\n';
    } else {
      out << "attempt " << i + 1 << ": " << d;
      if (g.debug)
        out << "  I~_W=" << format_number(a.weighted) << " (theta1 " << format_number(a.thresholds.weight)
            << ")  I~_F=" << format_number(a.faults) << " (theta2 " << format_number(a.thresholds.fault) << ")";
      out << '\n';
    }
  }
  if (!csv) {
    if (outcome.decision)
      out << "decision: accept\n";
    else
      out << "decision: reject" << (outcome.attemptsUsed >= static_cast<int>(allowed) ? ", fallback required" : "") << '\n';
  }
  return outcome.decision ? kAccept : kReject;
}

int cmd_evaluate(const Globals& g,
                 const std::vector<std::string>& shapeNames,
                 const std::string& shapesFile,
                 const std::string& profilesFile,
                 int trials,
                 const std::string& outPath,
                 std::ostream& out) {
  if (trials < 1) throw Error("--trials must be at least 1");
  const auto config = load(g);
  const auto [user, impostor] = profiles_for(profilesFile, g.seed);
  std::vector<synth::ExperimentReport> reports;
  for (const auto& shape : shapes_for(shapeNames, shapesFile))
    reports.push_back(synth::run_experiment(shape, user, impostor, trials, config));
  const auto text = synth::emit_report(reports, g.format == "csv" ? synth::ReportFormat::Csv : synth::ReportFormat::Text);
  if (outPath.empty())
    out << text;
  else
    write_file(outPath, text);
  return kAccept;
}

int cmd_inspect(const Globals& g, const std::string& path, const std::string& user, const std::string& gestureId, std::ostream& out) {
  EnrollmentRecord record;
  if (!path.empty())
    record = parse_record(read_file(path));
  else if (!user.empty() && !gestureId.empty())
    record = TemplateStore(data_root(g)).load(user, gestureId);
  else
    throw Error("inspect needs a record path or --user and --gesture");
  out << describe_record(record);
  return kAccept;
}

int cmd_gen(const Globals& g,
            const std::string& shapeName,
            const std::string& shapesFile,
            const std::string& profilesFile,
            int first,
            int last,
            bool impostorTrace,
            bool secret,
            const std::string& outDir,
            std::ostream& out) {
  if (first < 1 || last < first) throw Error("invalid round range");
  const auto shape = shapes_for({shapeName}, shapesFile).front();
  const auto [user, impostor] = profiles_for(profilesFile, g.seed);
  synth::GenOptions opt;
  opt.secretMode = secret;
  fs::create_directories(outDir);
  for (int r = first; r <= last; ++r) {
    const auto trace = impostorTrace ? synth::gen_impostor_trace(shape, user, impostor, r, opt)
                                     : synth::gen_trace(shape, user, r, opt);
    const auto path = fs::path(outDir) / (shape.name + (impostorTrace ? "-impostor-r" : "-r") + std::to_string(r) + ".trace");
    write_file(path, serialize_trace(trace));
    out << path.string() << '\n';
  }
  return kAccept;
}

int cmd_serve(const Globals& g, const std::string& host, int port, std::ostream& out) {
  TemplateStore store(data_root(g));
  ServiceOptions opt;
  opt.config = load(g);
  opt.debug = g.debug;
  opt.seed = g.seed;
  Service service(store, opt);
  httplib::Server server;
  service.mount(server);
  out << "listening on " << host << ':' << port << " (data " << store.root().string() << ")" << std::endl;
  if (!server.listen(host, port)) throw Error("cannot listen on " + host + ":" + std::to_string(port));
  return kAccept;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gesture authentication engine"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand
  Globals g;
  app.add_option("--config", g.configPath, "System configuration (JSON)");
  app.add_option("--data-dir", g.dataDir, "Template database root (default $SMAUG_DATA_DIR or ./smaug-data)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "csv"}));
  app.add_flag("--debug", g.debug, "Print indicators and thresholds");
  app.add_option("--seed", g.seed, "Seed for random choices and generated profiles");

  std::string user, name, gestureId, shapesFile, profilesFile, outPath, recordPath, bg, host = "127.0.0.1", outDir = ".";
  std::string shapeName = "A";
  std::vector<std::string> files, shapeNames;
  std::optional<bool> secret;
  bool random = false, bgMode = false, impostorTrace = false, publicGesture = false;
  int trials = 100, port = 8080, first = 1, last = 10;

  auto* enrollCmd = app.add_subcommand("enroll", "Enroll a gesture from P_E trace files");
  enrollCmd->add_option("--user", user)->required();
  enrollCmd->add_option("--gesture", name, "Gesture name")->required();
  enrollCmd->add_option("--id", gestureId, "Gesture id (default: the name)");
  enrollCmd->add_option("--secret", secret, "Hide the gesture name at verification");
  enrollCmd->add_flag("--bg-mode", bgMode, "Background image mode");
  enrollCmd->add_option("--bg", bg, "Background image reference");
  enrollCmd->add_option("traces", files)->required();

  auto* verifyCmd = app.add_subcommand("verify", "Verify up to P_V + 1 attempt traces");
  verifyCmd->add_option("--user", user)->required();
  auto* gestureOpt = verifyCmd->add_option("--gesture", gestureId, "Gesture id");
  verifyCmd->add_flag("--random", random, "Pick a registered gesture at random")->excludes(gestureOpt);
  verifyCmd->add_option("traces", files)->required();

  auto* evaluateCmd = app.add_subcommand("evaluate", "Synthetic TPR/FPR experiment");
  evaluateCmd->add_option("--shape", shapeNames, "Shape name (repeatable; default A and Bar)");
  evaluateCmd->add_option("--shapes", shapesFile, "Shape catalog document");
  evaluateCmd->add_option("--profiles", profilesFile, "Profile document");
  evaluateCmd->add_option("--trials", trials, "Genuine and impostor sessions per shape");
  evaluateCmd->add_option("--out", outPath, "Write the report here instead of stdout");

  auto* inspectCmd = app.add_subcommand("inspect", "Dump an enrollment record");
  inspectCmd->add_option("record", recordPath, "Record file");
  inspectCmd->add_option("--user", user);
  inspectCmd->add_option("--gesture", gestureId);

  auto* genCmd = app.add_subcommand("gen", "Write synthetic trace files");
  genCmd->add_option("--shape", shapeName);
  genCmd->add_option("--shapes", shapesFile);
  genCmd->add_option("--profiles", profilesFile);
  genCmd->add_option("--first", first, "First round");
  genCmd->add_option("--last", last, "Last round");
  genCmd->add_flag("--impostor", impostorTrace);
  genCmd->add_flag("--public", publicGesture, "Clear the secret flag in the trace meta");
  genCmd->add_option("--out-dir", outDir);

  auto* serveCmd = app.add_subcommand("serve", "Run the HTTP service");
  serveCmd->add_option("--host", host);
  serveCmd->add_option("--port", port);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kAccept;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kAccept;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }

  try {
    if (enrollCmd->parsed()) return cmd_enroll(g, user, name, gestureId, secret, bgMode, bg, files, out);
    if (verifyCmd->parsed()) return cmd_verify(g, user, gestureId, random, files, out);
    if (evaluateCmd->parsed()) {
      if (shapeNames.empty() && shapesFile.empty()) shapeNames = {"A", "Bar"};
      return cmd_evaluate(g, shapeNames, shapesFile, profilesFile, trials, outPath, out);
    }
    if (inspectCmd->parsed()) return cmd_inspect(g, recordPath, user, gestureId, out);
    if (genCmd->parsed()) return cmd_gen(g, shapeName, shapesFile, profilesFile, first, last, impostorTrace, !publicGesture, outDir, out);
    if (serveCmd->parsed()) return cmd_serve(g, host, port, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}

}  // namespace smaug::tools
