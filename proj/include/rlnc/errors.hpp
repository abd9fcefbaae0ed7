#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rlnc {

enum class ErrorKind {
  CycleDetected,
  DisconnectedRelay,
  InvalidProbability,
  NonPositiveBuffer,
  MissingSourceOrDest,
  ParseError,
  Unsupported,
  MemoryBudget,
  NegativeInnovativeness,
  NotLayered,
  ClosureViolation,
  StateBudgetExceeded,
  NonConvergence,
  NonTerminating,
  MismatchedSweep,
  UsageError,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::CycleDetected: return "CycleDetected";
    case ErrorKind::DisconnectedRelay: return "DisconnectedRelay";
    case ErrorKind::InvalidProbability: return "InvalidProbability";
    case ErrorKind::NonPositiveBuffer: return "NonPositiveBuffer";
    case ErrorKind::MissingSourceOrDest: return "MissingSourceOrDest";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::MemoryBudget: return "MemoryBudget";
    case ErrorKind::NegativeInnovativeness: return "NegativeInnovativeness";
    case ErrorKind::NotLayered: return "NotLayered";
    case ErrorKind::ClosureViolation: return "ClosureViolation";
    case ErrorKind::StateBudgetExceeded: return "StateBudgetExceeded";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::NonTerminating: return "NonTerminating";
    case ErrorKind::MismatchedSweep: return "MismatchedSweep";
    case ErrorKind::UsageError: return "UsageError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by the reduced engine when an update rule needs an occupancy entry
/// that the tracked family does not contain.  Records which entry was missing.
class ClosureViolation : public Error {
 public:
  ClosureViolation(std::uint32_t target_set, std::uint32_t demanded_set, int edge_index,
                   const std::string& what)
      : Error(ErrorKind::ClosureViolation, what),
        target_set_(target_set),
        demanded_set_(demanded_set),
        edge_index_(edge_index) {}

  std::uint32_t target_set() const { return target_set_; }
  std::uint32_t demanded_set() const { return demanded_set_; }
  int edge_index() const { return edge_index_; }

 private:
  std::uint32_t target_set_;
  std::uint32_t demanded_set_;
  int edge_index_;
};

}  // namespace rlnc
