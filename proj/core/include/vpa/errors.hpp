#pragma once

#include <stdexcept>
#include <string>

namespace vpa {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// No track-points survived session filtering.
class EmptySessionError : public Error {
 public:
  using Error::Error;
};

// Index pair outside the owning session.
class IndexError : public Error {
 public:
  using Error::Error;
};

// Training requested on an empty annotated corpus.
class EmptyTrainingError : public Error {
 public:
  using Error::Error;
};

// An evaluation driver needs more sessions than it was given.
class TooFewSessionsError : public Error {
 public:
  using Error::Error;
};

// Exhaustive solver guard tripped.
class TooLargeError : public Error {
 public:
  using Error::Error;
};

class InvalidConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed input file; carries file and line context.
class ParseError : public Error {
 public:
  ParseError(const std::string& file, long line, const std::string& detail)
      : Error(file + ":" + std::to_string(line) + ": " + detail),
        file_(file),
        line_(line) {}

  const std::string& file() const { return file_; }
  long line() const { return line_; }

 private:
  std::string file_;
  long line_;
};

}  // namespace vpa
