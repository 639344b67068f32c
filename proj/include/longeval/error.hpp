#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace longeval {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input record. `line()` is 1-based; 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A record refers to an ID that does not exist.
class ReferenceError : public Error {
 public:
  ReferenceError(const std::string& what, std::string id)
      : Error(what + ": " + id), id_(std::move(id)) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

/// An ID or key was seen twice where it must be unique.
class DuplicateError : public Error {
 public:
  using Error::Error;
};

/// Values outside their declared domain (labels, ratings, fractions, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Required entries are absent. `ids()` names them.
class MissingDataError : public Error {
 public:
  MissingDataError(const std::string& what, std::vector<std::string> ids)
      : Error(describe(what, ids)), ids_(std::move(ids)) {}
  const std::vector<std::string>& ids() const { return ids_; }

 private:
  static std::string describe(const std::string& what, const std::vector<std::string>& ids) {
    std::string out = what + " (" + std::to_string(ids.size()) + "):";
    for (const auto& id : ids) out += " " + id;
    return out;
  }
  std::vector<std::string> ids_;
};

/// A statistic has no defined value on the given data (zero variance, all ties).
class UndefinedStatistic : public Error {
 public:
  using Error::Error;
};

}  // namespace longeval
