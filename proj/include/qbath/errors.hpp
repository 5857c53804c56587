#pragma once

#include <sstream>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace qbath {

/// Base class of everything this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Violation { NotHermitian, TraceNotOne, NotPSD, NonFinite };

inline const char* to_string(Violation v) {
  switch (v) {
    case Violation::NotHermitian: return "NotHermitian";
    case Violation::TraceNotOne: return "TraceNotOne";
    case Violation::NotPSD: return "NotPSD";
    case Violation::NonFinite: return "NonFinite";
  }
  return "?";
}

/// One failed density-operator invariant and how far it was off.
struct InvariantFailure {
  Violation kind;
  double magnitude;
};

class InvalidDensity : public Error {
 public:
  explicit InvalidDensity(std::vector<InvariantFailure> failures)
      : Error(describe(failures)), failures_(std::move(failures)) {}

  const std::vector<InvariantFailure>& failures() const { return failures_; }

  bool has(Violation v) const {
    for (const auto& f : failures_)
      if (f.kind == v) return true;
    return false;
  }

 private:
  static std::string describe(const std::vector<InvariantFailure>& fs) {
    std::ostringstream os;
    os << "invalid density operator:";
    for (const auto& f : fs) os << ' ' << to_string(f.kind) << "(" << f.magnitude << ")";
    return os.str();
  }

  std::vector<InvariantFailure> failures_;
};

class WrongBasis : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public Error {
 public:
  explicit NotHermitian(double err)
      : Error("matrix is not Hermitian (max |M - M^dagger| = " + std::to_string(err) + ")"),
        magnitude(err) {}
  double magnitude;
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

class NonPositiveFrequency : public Error {
 public:
  using Error::Error;
};

class DegenerateRates : public Error {
 public:
  using Error::Error;
};

/// Trace drift of a numerically propagated state exceeded tolerance.
class StepTooLarge : public Error {
  static std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
  }

 public:
  StepTooLarge(double t, double drift)
      : Error("trace drift " + sci(drift) + " at t = " + sci(t)),
        time(t),
        magnitude(drift) {}
  double time;
  double magnitude;
};

/// A propagated snapshot violated a state invariant.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class AssumptionViolated : public Error {
 public:
  using Error::Error;
};

class NegativeEigenvalue : public Error {
 public:
  explicit NegativeEigenvalue(double v)
      : Error("state has eigenvalue " + std::to_string(v)), value(v) {}
  double value;
};

/// Bad configuration input. `line` is 1-based, 0 when not tied to a file line.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line(line) {}
  int line;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

}  // namespace qbath
