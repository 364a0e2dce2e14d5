#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qtopo {

// Failure taxonomy shared by every module. The names are part of the CLI
// contract and appear verbatim in error records.
enum class ErrorKind {
  InvalidArgument,
  NotHermitian,
  NonConverged,
  DegenerateGap,
  AmbiguousMatch,
  UnsupportedPhase,
  OnTransition,
  ZeroFrequency,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NonConverged: return "NonConverged";
    case ErrorKind::DegenerateGap: return "DegenerateGap";
    case ErrorKind::AmbiguousMatch: return "AmbiguousMatch";
    case ErrorKind::UnsupportedPhase: return "UnsupportedPhase";
    case ErrorKind::OnTransition: return "OnTransition";
    case ErrorKind::ZeroFrequency: return "ZeroFrequency";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return to_string(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace qtopo
