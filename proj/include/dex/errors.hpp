#pragma once

#include <stdexcept>
#include <string>

namespace dex {

// Malformed input files or values (exit code 2 at the CLI).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally valid input that violates an operation's precondition
// (exit code 1 at the CLI).
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// An exhaustive computation would exceed the configured enumeration budget
// (exit code 3 at the CLI). Carries the estimated work.
class SizeRefusal : public std::runtime_error {
 public:
  SizeRefusal(const std::string& what, double estimate)
      : std::runtime_error(what), estimate(estimate) {}
  double estimate;
};

// A documented invariant failed mid-run; signals a precondition violation
// detected late (e.g. a trading cycle longer than two under discrete TU).
class InvariantError : public std::runtime_error {
 public:
  explicit InvariantError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dex
