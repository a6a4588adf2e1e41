#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace guicomp {

// Base of every error raised by the library. `code()` is the machine-readable
// tag used on the HTTP wire (`{error:{code,message}}`).
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Malformed JSON. `offset()` is the byte position reported by the parser.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error("parse_error", what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error("validation_error", what) {}
};

class ArgumentError : public Error {
 public:
  explicit ArgumentError(const std::string& what) : Error("invalid_argument", what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("io_error", what) {}
};

// Binary container with an unexpected magic or version.
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what) : Error("format_error", what) {}
};

// Binary container that fails its checksum or ends early.
class CorruptionError : public Error {
 public:
  explicit CorruptionError(const std::string& what) : Error("corrupt_data", what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error("numeric_error", what) {}
};

class TrainingError : public Error {
 public:
  TrainingError(const std::string& what, std::size_t epoch)
      : Error("training_diverged", what), epoch_(epoch) {}

  std::size_t epoch() const noexcept { return epoch_; }

 private:
  std::size_t epoch_;
};

class AttentionUnavailable : public Error {
 public:
  explicit AttentionUnavailable(const std::string& what)
      : Error("attention_unavailable", what) {}
};

class NotFoundError : public Error {
 public:
  explicit NotFoundError(const std::string& what) : Error("not_found", what) {}
};

// Percentiles against a corpus with no entries.
class EmptyCorpusError : public Error {
 public:
  explicit EmptyCorpusError(const std::string& what) : Error("empty_corpus", what) {}
};

}  // namespace guicomp
