#ifndef FAIRMETRICS_ERROR_H_
#define FAIRMETRICS_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fairmetrics {

// Base class for every error the library reports. Callers that only need
// a diagnostic can catch this; the CLI maps it to exit status 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a documented precondition (bad alpha, n < 2, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A score or protocol file could not be parsed. line() is 1-based, 0 when
// the problem is not tied to a single line (e.g. a group missing mated trials).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// No observed nonmated score yields a positive FMR at or below the target.
class UnreachableTarget : public Error {
 public:
  UnreachableTarget(double target, double closest_fmr)
      : Error("FMR target " + std::to_string(target) +
              " is unreachable; closest achievable positive FMR is " +
              std::to_string(closest_fmr)),
        target_(target),
        closest_fmr_(closest_fmr) {}
  double target() const { return target_; }
  double closest_fmr() const { return closest_fmr_; }

 private:
  double target_;
  double closest_fmr_;
};

}  // namespace fairmetrics

#endif  // FAIRMETRICS_ERROR_H_
