#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>

namespace plevt {

// Base of every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A result exists mathematically but is not representable as a double.
class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

// The expression is 0/0 or otherwise cannot be evaluated in floating point.
class NotEvaluableError : public Error {
 public:
  using Error::Error;
};

// The sample carries no information for the statistic (e.g. all top spacings zero).
class DegenerateSampleError : public Error {
 public:
  using Error::Error;
};

class FitInfeasibleError : public Error {
 public:
  FitInfeasibleError(const std::string& what, double m1, double m2)
      : Error(what), first_moment_(m1), second_moment_(m2) {}

  double first_moment() const noexcept { return first_moment_; }
  double second_moment() const noexcept { return second_moment_; }

 private:
  double first_moment_;
  double second_moment_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what), line_(line) {}

  // 1-based line number of the offending row.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A Monte Carlo experiment whose side conditions are violated. Carries the
// diagnostic values that triggered the refusal.
class ConditionRefusedError : public Error {
 public:
  ConditionRefusedError(const std::string& what,
                        std::map<std::string, double> diagnostics)
      : Error(what), diagnostics_(std::move(diagnostics)) {}

  const std::map<std::string, double>& diagnostics() const noexcept {
    return diagnostics_;
  }

 private:
  std::map<std::string, double> diagnostics_;
};

}  // namespace plevt
