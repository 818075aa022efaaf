#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace abb {

// Operation outside the domain of an interval or real function
// (division by an interval containing zero, log of a non-positive value).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Failure while evaluating an expression; `path()` names the offending node
// as a '/'-separated list of child indices from the root ("" is the root).
class EvalError : public std::runtime_error {
 public:
  EvalError(const std::string& what, std::string path)
      : std::runtime_error(what + (path.empty() ? " at root" : " at node /" + path)),
        path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// Differentiation through a non-smooth node (abs).
class UnsupportedNode : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Intersection of enclosures came out empty: at least one enclosure is unsound.
class InconsistentEnclosure : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class DegenerateInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Problem-file errors, reported with a 1-based line number (0 when the
// error is not tied to a line).
class ProblemError : public std::runtime_error {
 public:
  ProblemError(const std::string& what, std::size_t line)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace abb
