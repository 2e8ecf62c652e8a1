#pragma once

#include <stdexcept>
#include <string>

namespace adasample {

// Invalid configuration or arguments: bad hyperparameters, inconsistent
// shapes, contradictory flag combinations.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed input file; line is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, long line = 0)
      : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

// File could not be opened or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The iterate or a batch objective value left the admissible range.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Backtracking exhausted its budget without sufficient decrease; carries the
// last Lipschitz estimate that was tried.
class LineSearchError : public std::runtime_error {
 public:
  LineSearchError(const std::string& what, double last_l)
      : std::runtime_error(what), last_l_(last_l) {}
  double last_l() const { return last_l_; }

 private:
  double last_l_;
};

}  // namespace adasample
