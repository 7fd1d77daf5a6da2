#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "smaug/authflow.hpp"

namespace smaug {

/// Canonical text form of an enrollment record:
///
///   #SMAUG-TEMPLATE v1
///   USER <text>
///   CREATED <seconds>
///   META gestureId=... (as in traces)
///   PARAMS <offsetStartMs> <offsetEndMs> <fusionWindowMs> <extraAttempts> <rounds>
///   ROUND <r>                one block per retained round
///   META ...                 round meta
///   TOUCH ... / GYRO ... / ACCEL ...      T1, G1, A1
///   FUSION <t> <g1 g2 g3> <a1 a2 a3>       F1
///   T2 <10 values>
///   T3 <stroke> <106 values>
///   G2 <90 values> | G2 -    (likewise A2; F2 with 9 values)
///   END
///   T4 <stroke> <best round> <3 x FiveStat>
///   T5 <strokeCount> <maxPointers> <7 x FiveStat>
///   T6 <stroke> <106 x FiveStat>
///   G3 <90 x FiveStat> | G3 -   (likewise A3; F3 with 9)
///   F4 <best round> <6 x FiveStat> | F4 -
///   TIERS <one> <two> <three>
///   RULE <tier> <prefix>      (empty prefix written as "-")
///   W <kind> <feature> <LB|UB|EQ> <stroke> <weight>
///   IND <I_F> <I_W>
///   TH <Theta_1> <Theta_2> <P_W*> <P_W+> <P_F*> <P_F+>
///   CHECKSUM <crc32 of all preceding bytes, 8 hex digits>
///
/// FiveStat values are written min max stdev median am. Stroke series and
/// fusion angle sequences are recomputed from T1 and F1 on load.
std::string serialize_record(const EnrollmentRecord& record);

/// Throws VersionMismatch, CorruptRecord (checksum or structure) or
/// MalformedDocument.
EnrollmentRecord parse_record(std::string_view document);

/// One directory per user holding one record per gesture and an index:
///
///   #SMAUG-INDEX v1
///   GESTURE gestureId=... name=... round=1 secret=... bgmode=... bg=...
///
/// Writes for the same user are serialized and land atomically (write to a
/// temporary file, then rename). Reads need no locking.
class TemplateStore {
 public:
  explicit TemplateStore(std::filesystem::path root);

  const std::filesystem::path& root() const noexcept { return root_; }

  /// Persists the record and updates the user's index; returns the record path.
  std::filesystem::path save(const EnrollmentRecord& record);

  /// Throws NotFound, VersionMismatch, CorruptRecord.
  EnrollmentRecord load(const std::string& user, const std::string& gestureId) const;

  /// Registered gestures of a user in index order; empty for unknown users.
  std::vector<GestureMeta> list(const std::string& user) const;

  bool contains(const std::string& user, const std::string& gestureId) const;

  std::filesystem::path user_dir(const std::string& user) const;
  std::filesystem::path record_path(const std::string& user, const std::string& gestureId) const;

 private:
  std::mutex& user_mutex(const std::string& user);

  std::filesystem::path root_;
  std::mutex table_mutex_;
  std::map<std::string, std::unique_ptr<std::mutex>> user_mutexes_;
};

/// File-name-safe encoding: [A-Za-z0-9_-] kept, everything else as %XX.
std::string encode_path_component(std::string_view text);

}  // namespace smaug
