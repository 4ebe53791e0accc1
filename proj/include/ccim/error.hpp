#pragma once

#include <stdexcept>
#include <string>

namespace ccim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input: bad grid size, unknown names, malformed config.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line) : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// A small dense system (coupling matrix, jump system) is singular or too ill-conditioned.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

/// No mixed-derivative scheme applies at an interface point; the grid must be refined.
class UnresolvablePoint : public Error {
 public:
  using Error::Error;
};

class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace ccim
