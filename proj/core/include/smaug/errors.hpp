#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace smaug {

/// Base of every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedDocument : public Error {
 public:
  MalformedDocument(const std::string& what, std::size_t line)
      : Error("malformed document (line " + std::to_string(line) + "): " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A field is missing or outside its legal range. `record` is the index of the
/// offending record within its section.
class SchemaViolation : public Error {
 public:
  SchemaViolation(std::string field, std::size_t record)
      : Error("schema violation: field '" + field + "' in record " + std::to_string(record)),
        field_(std::move(field)),
        record_(record) {}
  const std::string& field() const noexcept { return field_; }
  std::size_t record() const noexcept { return record_; }

 private:
  std::string field_;
  std::size_t record_;
};

class InconsistentStream : public Error {
 public:
  using Error::Error;
};

class UnterminatedStroke : public Error {
 public:
  explicit UnterminatedStroke(int pointerId)
      : Error("stroke of pointer " + std::to_string(pointerId) + " has no up event"),
        pointer_id_(pointerId) {}
  int pointer_id() const noexcept { return pointer_id_; }

 private:
  int pointer_id_;
};

class EmptyFusion : public Error {
 public:
  EmptyFusion() : Error("motion fusion produced no gyro/accel pairs") {}
};

class EmptySequence : public Error {
 public:
  EmptySequence() : Error("sequence must not be empty") {}
};

class EmptyTouch : public Error {
 public:
  EmptyTouch() : Error("trace contains no touch events") {}
};

class StrokeCountMismatch : public Error {
 public:
  StrokeCountMismatch(int round, int expected, int actual)
      : Error("round " + std::to_string(round) + " has " + std::to_string(actual) +
              " strokes, expected " + std::to_string(expected)),
        round_(round) {}
  int round() const noexcept { return round_; }

 private:
  int round_;
};

class InsufficientRounds : public Error {
 public:
  InsufficientRounds(std::size_t expected, std::size_t actual)
      : Error("expected " + std::to_string(expected) + " rounds, got " + std::to_string(actual)) {}
};

class NotFound : public Error {
 public:
  using Error::Error;
};

class VersionMismatch : public Error {
 public:
  using Error::Error;
};

class CorruptRecord : public Error {
 public:
  using Error::Error;
};

class EmptyRegistry : public Error {
 public:
  EmptyRegistry() : Error("no gestures registered") {}
};

}  // namespace smaug
