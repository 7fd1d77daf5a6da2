#include "smaug/store.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <zlib.h>

#include "line_format.hpp"
#include "smaug/errors.hpp"
#include "trace_lines.hpp"

namespace smaug {

namespace {

namespace fs = std::filesystem;

constexpr std::string_view kHeader = "#SMAUG-TEMPLATE v1";
constexpr std::string_view kHeaderPrefix = "#SMAUG-TEMPLATE";
constexpr std::string_view kIndexHeader = "#SMAUG-INDEX v1";
constexpr std::string_view kChecksumTag = "CHECKSUM ";
constexpr std::string_view kRecordSuffix = ".smaug";

std::uint32_t checksum(std::string_view body) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(body.data()), static_cast<uInt>(body.size()));
  return static_cast<std::uint32_t>(crc);
}

std::string hex32(std::uint32_t v) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", v);
  return buf;
}

class Writer {
 public:
  Writer& tag(std::string_view t) {
    out_ += t;
    return *this;
  }
  Writer& real(double v) {
    out_ += ' ';
    detail::append_real(out_, v);
    return *this;
  }
  template <typename Int>
  Writer& integer(Int v) {
    out_ += ' ';
    detail::append_int(out_, v);
    return *this;
  }
  Writer& text(std::string_view t) {
    out_ += ' ';
    out_ += t;
    return *this;
  }
  Writer& reals(const std::vector<double>& v) {
    for (double x : v) real(x);
    return *this;
  }
  Writer& five(const FiveStat& f) { return real(f.min).real(f.max).real(f.stdev).real(f.median).real(f.am); }
  Writer& fives(std::span<const FiveStat> v) {
    for (const auto& f : v) five(f);
    return *this;
  }
  void end() { out_ += '\n'; }
  std::string& raw() { return out_; }

 private:
  std::string out_;
};

void write_round(Writer& w, const RoundFeatures& rf) {
  w.tag("ROUND").integer(rf.round.meta.round).end();
  w.tag("META");
  detail::append_meta_fields(w.raw(), rf.round.meta);
  w.end();
  for (const auto& e : rf.round.touch.events) detail::append_touch(w.raw(), e);
  for (const auto& e : rf.round.gyro) detail::append_motion(w.raw(), "GYRO", e);
  for (const auto& e : rf.round.accel) detail::append_motion(w.raw(), "ACCEL", e);
  for (const auto& e : rf.round.fusion) {
    w.tag("FUSION").integer(e.timeNs);
    for (double v : e.gyro) w.real(v);
    for (double v : e.accel) w.real(v);
    w.end();
  }
  w.tag("T2").reals(rf.touchRound).end();
  for (std::size_t s = 0; s < rf.strokes.size(); ++s) w.tag("T3").integer(s).reals(rf.strokes[s]).end();
  auto optional_row = [&](std::string_view tag, const std::optional<FeatureVector>& row) {
    w.tag(tag);
    if (row) w.reals(*row);
    else w.text("-");
    w.end();
  };
  optional_row("G2", rf.gyro);
  optional_row("A2", rf.accel);
  optional_row("F2", rf.fusion);
  w.tag("END").end();
}

// Sequential line cursor over the record body.
class Cursor {
 public:
  explicit Cursor(std::string_view body) : reader_(body) { advance(); }

  bool done() const { return done_; }
  std::string_view tag() const { return fields_.empty() ? std::string_view{} : fields_.front(); }
  const std::vector<std::string_view>& fields() const { return fields_; }
  std::size_t line() const { return reader_.line_number(); }

  void advance() {
    std::string_view l;
    if (!reader_.next(l)) {
      done_ = true;
      fields_.clear();
      return;
    }
    fields_ = detail::split_fields(l);
  }

  const std::vector<std::string_view>& expect(std::string_view t) {
    if (done_ || tag() != t) fail("expected " + std::string(t));
    return fields_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw CorruptRecord("record line " + std::to_string(line()) + ": " + what);
  }

  double real(std::size_t i) const { return detail::require_real(at(i), line()); }
  std::int64_t integer(std::size_t i) const { return detail::require_int(at(i), line()); }

  std::vector<double> reals(std::size_t from, std::size_t count) const {
    if (fields_.size() != from + count) fail("expected " + std::to_string(count) + " values");
    std::vector<double> v(count);
    for (std::size_t k = 0; k < count; ++k) v[k] = real(from + k);
    return v;
  }

  std::vector<FiveStat> fives(std::size_t from, std::size_t count) const {
    const auto v = reals(from, count * 5);
    std::vector<FiveStat> out(count);
    for (std::size_t k = 0; k < count; ++k) out[k] = {v[5 * k], v[5 * k + 1], v[5 * k + 2], v[5 * k + 3], v[5 * k + 4]};
    return out;
  }

  bool absent(std::size_t i) const { return fields_.size() == i + 1 && fields_[i] == "-"; }

 private:
  std::string_view at(std::size_t i) const {
    if (i >= fields_.size()) fail("missing field");
    return fields_[i];
  }

  detail::LineReader reader_;
  std::vector<std::string_view> fields_;
  bool done_ = false;
};

RoundFeatures read_round(Cursor& c) {
  c.expect("ROUND");
  const auto number = c.integer(1);
  c.advance();
  ProcessedRound pr;
  pr.meta = detail::parse_meta_fields(c.expect("META"), c.line());
  if (pr.meta.round != number) c.fail("round number mismatch");
  c.advance();

  std::vector<TouchEvent> touch;
  for (; c.tag() == "TOUCH"; c.advance()) touch.push_back(detail::parse_touch_fields(c.fields(), c.line()));
  for (; c.tag() == "GYRO"; c.advance()) pr.gyro.push_back(detail::parse_motion_fields(c.fields(), c.line()));
  for (; c.tag() == "ACCEL"; c.advance()) pr.accel.push_back(detail::parse_motion_fields(c.fields(), c.line()));
  for (; c.tag() == "FUSION"; c.advance()) {
    const auto v = c.reals(2, 6);
    pr.fusion.push_back({c.integer(1), {v[0], v[1], v[2]}, {v[3], v[4], v[5]}});
  }
  if (touch.empty()) c.fail("round without touch events");
  pr.touch = determine_strokes(std::move(touch));

  RoundFeatures rf;
  rf.round = std::move(pr);
  rf.strokeSeries = stroke_series(rf.round.touch);
  c.expect("T2");
  rf.touchRound = c.reals(1, kRoundFeatureCount);
  c.advance();
  for (; c.tag() == "T3"; c.advance()) {
    if (c.integer(1) != static_cast<std::int64_t>(rf.strokes.size())) c.fail("stroke rows out of order");
    rf.strokes.push_back(c.reals(2, kStrokeFeatureCount));
  }
  if (rf.strokes.size() != rf.round.touch.strokes.size()) c.fail("stroke rows do not match T1");

  auto optional_row = [&](std::string_view tag, std::size_t count) -> std::optional<FeatureVector> {
    c.expect(tag);
    std::optional<FeatureVector> row;
    if (!c.absent(1)) row = c.reals(1, count);
    c.advance();
    return row;
  };
  rf.gyro = optional_row("G2", kMotionFeatureCount);
  rf.accel = optional_row("A2", kMotionFeatureCount);
  rf.fusion = optional_row("F2", kFusionFeatureCount);
  if (rf.fusion.has_value() != (rf.round.fusion.size() >= kMinFusionEvents)) c.fail("F2 does not match F1");
  if (rf.fusion) rf.fusionSeries = motion_fusion_series(rf.round.fusion);
  c.expect("END");
  c.advance();
  return rf;
}

EnrollmentRecord parse_body(std::string_view body) {
  Cursor c(body);
  c.advance();  // header line already checked

  EnrollmentRecord rec;
  {
    const auto& f = c.expect("USER");
    if (f.size() != 2) c.fail("USER needs one field");
    rec.user = decode_text(f[1]);
    c.advance();
  }
  c.expect("CREATED");
  rec.createdAt = c.integer(1);
  c.advance();
  auto& tmpl = rec.tmpl;
  tmpl.meta = detail::parse_meta_fields(c.expect("META"), c.line());
  c.advance();
  c.expect("PARAMS");
  if (c.fields().size() != 6) c.fail("PARAMS needs five fields");
  rec.preprocess = {c.real(1), c.real(2), c.real(3)};
  rec.extraAttempts = static_cast<int>(c.integer(4));
  const auto rounds = c.integer(5);
  c.advance();
  if (rounds < 1) c.fail("record without rounds");
  for (std::int64_t r = 0; r < rounds; ++r) tmpl.rounds.push_back(read_round(c));

  const auto check_round = [&](std::int64_t r) {
    if (r < 0 || r >= rounds) c.fail("best round out of range");
    return static_cast<std::size_t>(r);
  };
  for (; c.tag() == "T4"; c.advance()) {
    if (c.integer(1) != static_cast<std::int64_t>(tmpl.touchDtw.size())) c.fail("T4 rows out of order");
    StrokeDtwTemplate t;
    t.bestRound = check_round(c.integer(2));
    const auto stats = c.fives(3, kTouchDtwFeatureCount);
    std::copy(stats.begin(), stats.end(), t.distance.begin());
    tmpl.touchDtw.push_back(t);
  }
  c.expect("T5");
  tmpl.touchGesture.strokeCount = static_cast<int>(c.integer(1));
  tmpl.touchGesture.maxPointers = static_cast<int>(c.integer(2));
  tmpl.touchGesture.bounded = c.fives(3, bounded_round_features().size());
  c.advance();
  for (; c.tag() == "T6"; c.advance()) {
    if (c.integer(1) != static_cast<std::int64_t>(tmpl.touchStroke.size())) c.fail("T6 rows out of order");
    tmpl.touchStroke.push_back(c.fives(2, kStrokeFeatureCount));
  }
  if (tmpl.touchStroke.size() != tmpl.touchDtw.size()) c.fail("T4 and T6 disagree on stroke count");
  for (const auto& r : tmpl.rounds)
    if (r.strokes.size() != tmpl.touchStroke.size()) c.fail("round stroke count differs from template");

  auto optional_table = [&](std::string_view tag, std::size_t count) -> std::optional<std::vector<FiveStat>> {
    c.expect(tag);
    std::optional<std::vector<FiveStat>> t;
    if (!c.absent(1)) t = c.fives(1, count);
    c.advance();
    return t;
  };
  tmpl.gyro = optional_table("G3", kMotionFeatureCount);
  tmpl.accel = optional_table("A3", kMotionFeatureCount);
  tmpl.fusion = optional_table("F3", kFusionFeatureCount);
  c.expect("F4");
  if (!c.absent(1)) {
    FusionDtwTemplate t;
    t.bestRound = check_round(c.integer(1));
    if (!tmpl.rounds[t.bestRound].fusionSeries) c.fail("F4 best round lacks fusion data");
    const auto stats = c.fives(2, kFusionSequenceCount);
    std::copy(stats.begin(), stats.end(), t.distance.begin());
    tmpl.fusionDtw = t;
  }
  c.advance();

  c.expect("TIERS");
  const auto tiers = c.reals(1, 3);
  rec.tiers = {tiers[0], tiers[1], tiers[2]};
  c.advance();
  for (; c.tag() == "RULE"; c.advance()) {
    if (c.fields().size() != 3) c.fail("RULE needs two fields");
    const auto tier = c.integer(1);
    if (tier < 1 || tier > 3) c.fail("tier out of range");
    const auto prefix = c.fields()[2];
    rec.tierRules.push_back({prefix == "-" ? std::string() : decode_text(prefix), static_cast<Tier>(tier)});
  }
  for (; c.tag() == "W"; c.advance()) {
    if (c.fields().size() != 6) c.fail("W needs five fields");
    const auto kind = parse_check_kind(c.fields()[1]);
    const auto cmp = parse_comparison(c.fields()[3]);
    const auto feature = c.integer(2);
    if (!kind || !cmp || feature < 0 || static_cast<std::size_t>(feature) >= feature_count(*kind))
      c.fail("invalid weight key");
    const FeatureKey key{*kind, static_cast<std::uint16_t>(feature), *cmp, static_cast<int>(c.integer(4))};
    if (!rec.weights.weights.emplace(key, c.real(5)).second) c.fail("duplicate weight");
  }
  c.expect("IND");
  const auto ind = c.reals(1, 2);
  rec.weights.faultIndicator = ind[0];
  rec.weights.weightIndicator = ind[1];
  c.advance();
  c.expect("TH");
  const auto th = c.reals(1, 6);
  rec.thresholds = {th[0], th[1], {th[2], th[3], th[4], th[5]}};
  c.advance();
  if (!c.done()) c.fail("unexpected trailing record");
  return rec;
}

void write_atomically(const fs::path& path, std::string_view content) {
  const auto tmp = fs::path(path).concat(".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out.flush()) throw Error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string serialize_index(const std::vector<GestureMeta>& metas) {
  std::string out(kIndexHeader);
  out += '\n';
  for (const auto& m : metas) {
    out += "GESTURE";
    detail::append_meta_fields(out, m);
    out += '\n';
  }
  return out;
}

std::vector<GestureMeta> parse_index(std::string_view text) {
  detail::LineReader reader(text);
  std::string_view line;
  if (!reader.next(line) || line != kIndexHeader) throw VersionMismatch("unsupported index document");
  std::vector<GestureMeta> out;
  while (reader.next(line)) {
    if (line.empty() || line.front() == '#') continue;
    const auto fields = detail::split_fields(line);
    if (fields.front() != "GESTURE") throw CorruptRecord("unexpected index line " + std::to_string(reader.line_number()));
    out.push_back(detail::parse_meta_fields(fields, reader.line_number()));
  }
  return out;
}

}  // namespace

std::string serialize_record(const EnrollmentRecord& rec) {
  Writer w;
  w.tag(kHeader).end();
  w.tag("USER").text(encode_text(rec.user)).end();
  w.tag("CREATED").integer(rec.createdAt).end();
  w.tag("META");
  detail::append_meta_fields(w.raw(), rec.tmpl.meta);
  w.end();
  w.tag("PARAMS")
      .real(rec.preprocess.offsetStartMs)
      .real(rec.preprocess.offsetEndMs)
      .real(rec.preprocess.fusionWindowMs)
      .integer(rec.extraAttempts)
      .integer(rec.tmpl.rounds.size())
      .end();
  for (const auto& r : rec.tmpl.rounds) write_round(w, r);

  const auto& t = rec.tmpl;
  for (std::size_t s = 0; s < t.touchDtw.size(); ++s)
    w.tag("T4").integer(s).integer(t.touchDtw[s].bestRound).fives(t.touchDtw[s].distance).end();
  w.tag("T5").integer(t.touchGesture.strokeCount).integer(t.touchGesture.maxPointers).fives(t.touchGesture.bounded).end();
  for (std::size_t s = 0; s < t.touchStroke.size(); ++s) w.tag("T6").integer(s).fives(t.touchStroke[s]).end();
  auto optional_table = [&](std::string_view tag, const std::optional<std::vector<FiveStat>>& table) {
    w.tag(tag);
    if (table) w.fives(*table);
    else w.text("-");
    w.end();
  };
  optional_table("G3", t.gyro);
  optional_table("A3", t.accel);
  optional_table("F3", t.fusion);
  w.tag("F4");
  if (t.fusionDtw) w.integer(t.fusionDtw->bestRound).fives(t.fusionDtw->distance);
  else w.text("-");
  w.end();

  w.tag("TIERS").real(rec.tiers.one).real(rec.tiers.two).real(rec.tiers.three).end();
  for (const auto& rule : rec.tierRules)
    w.tag("RULE").integer(static_cast<int>(rule.tier)).text(rule.prefix.empty() ? "-" : encode_text(rule.prefix)).end();
  for (const auto& [key, weight] : rec.weights.weights)
    w.tag("W").text(to_string(key.kind)).integer(key.feature).text(to_string(key.cmp)).integer(key.stroke).real(weight).end();
  w.tag("IND").real(rec.weights.faultIndicator).real(rec.weights.weightIndicator).end();
  const auto& th = rec.thresholds;
  w.tag("TH")
      .real(th.weight)
      .real(th.fault)
      .real(th.params.weightMul)
      .real(th.params.weightAdd)
      .real(th.params.faultMul)
      .real(th.params.faultAdd)
      .end();

  auto& out = w.raw();
  const auto crc = checksum(out);
  out += kChecksumTag;
  out += hex32(crc);
  out += '\n';
  return std::move(out);
}

EnrollmentRecord parse_record(std::string_view doc) {
  const auto first_nl = doc.find('\n');
  auto header = doc.substr(0, first_nl);
  if (!header.empty() && header.back() == '\r') header.remove_suffix(1);
  if (header != kHeader) {
    if (header.starts_with(kHeaderPrefix)) throw VersionMismatch("unsupported record version '" + std::string(header) + "'");
    throw CorruptRecord("missing '#SMAUG-TEMPLATE v1' header");
  }

  std::string_view trimmed = doc;
  while (!trimmed.empty() && (trimmed.back() == '\n' || trimmed.back() == '\r')) trimmed.remove_suffix(1);
  const auto pos = trimmed.rfind('\n');
  if (pos == std::string_view::npos) throw CorruptRecord("missing checksum");
  const auto last = trimmed.substr(pos + 1);
  if (!last.starts_with(kChecksumTag)) throw CorruptRecord("missing checksum");
  const auto body = doc.substr(0, pos + 1);
  if (last.substr(kChecksumTag.size()) != hex32(checksum(body))) throw CorruptRecord("checksum mismatch");

  try {
    return parse_body(body);
  } catch (const CorruptRecord&) {
    throw;
  } catch (const Error& e) {
    throw CorruptRecord(e.what());
  }
}

std::string encode_path_component(std::string_view text) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
    if (keep) {
      out += ch;
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xf];
    }
  }
  return out.empty() ? std::string("%") : out;
}

TemplateStore::TemplateStore(std::filesystem::path root) : root_(std::move(root)) {}

fs::path TemplateStore::user_dir(const std::string& user) const { return root_ / encode_path_component(user); }

fs::path TemplateStore::record_path(const std::string& user, const std::string& gestureId) const {
  return user_dir(user) / (encode_path_component(gestureId) + std::string(kRecordSuffix));
}

std::mutex& TemplateStore::user_mutex(const std::string& user) {
  std::lock_guard lock(table_mutex_);
  auto& slot = user_mutexes_[user];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

fs::path TemplateStore::save(const EnrollmentRecord& record) {
  std::lock_guard lock(user_mutex(record.user));
  const auto dir = user_dir(record.user);
  fs::create_directories(dir);
  const auto path = record_path(record.user, record.gesture_id());
  write_atomically(path, serialize_record(record));

  auto metas = list(record.user);
  GestureMeta entry = record.tmpl.meta;
  entry.round = 1;
  bool replaced = false;
  for (auto& m : metas) {
    if (m.gestureId == entry.gestureId) {
      m = entry;
      replaced = true;
    }
  }
  if (!replaced) metas.push_back(entry);
  write_atomically(dir / "index.txt", serialize_index(metas));
  return path;
}

EnrollmentRecord TemplateStore::load(const std::string& user, const std::string& gestureId) const {
  const auto path = record_path(user, gestureId);
  if (!fs::exists(path)) throw NotFound("no gesture '" + gestureId + "' for user '" + user + "'");
  return parse_record(read_file(path));
}

std::vector<GestureMeta> TemplateStore::list(const std::string& user) const {
  const auto path = user_dir(user) / "index.txt";
  if (!fs::exists(path)) return {};
  return parse_index(read_file(path));
}

bool TemplateStore::contains(const std::string& user, const std::string& gestureId) const {
  return fs::exists(record_path(user, gestureId));
}

}  // namespace smaug
