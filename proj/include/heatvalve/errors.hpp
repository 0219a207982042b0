#pragma once

#include <stdexcept>
#include <string>

namespace heatvalve {

/// Physics failures that a sweep records as a per-row status rather than
/// aborting.
enum class ErrorKind {
  PolePassage,
  Instability,
  DegenerateBasis,
  IsolatedMode,
  NoRoot,
  NumericalBranch,
  Unphysical,
  NotConverged,
  DegenerateKernel,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::PolePassage: return "PolePassage";
    case ErrorKind::Instability: return "Instability";
    case ErrorKind::DegenerateBasis: return "DegenerateBasis";
    case ErrorKind::IsolatedMode: return "IsolatedMode";
    case ErrorKind::NoRoot: return "NoRoot";
    case ErrorKind::NumericalBranch: return "NumericalBranch";
    case ErrorKind::Unphysical: return "Unphysical";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::DegenerateKernel: return "DegenerateKernel";
  }
  return "Unknown";
}

class PhysicsError : public std::runtime_error {
 public:
  PhysicsError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Malformed configuration text.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Well-formed configuration that violates a domain invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace heatvalve
