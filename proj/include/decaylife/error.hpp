#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace decaylife {

enum class ErrorKind {
  InvalidParams,
  SingularBasis,
  NegativeTime,
  NegativeDensity,
  ZeroPostselection,
  OrthogonalPrePost,
  DegenerateMass,
  SingularPostselection,
  IndeterminateAtOrigin,
  NonMonotoneCDF,
  InsufficientSamples,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::SingularBasis: return "SingularBasis";
    case ErrorKind::NegativeTime: return "NegativeTime";
    case ErrorKind::NegativeDensity: return "NegativeDensity";
    case ErrorKind::ZeroPostselection: return "ZeroPostselection";
    case ErrorKind::OrthogonalPrePost: return "OrthogonalPrePost";
    case ErrorKind::DegenerateMass: return "DegenerateMass";
    case ErrorKind::SingularPostselection: return "SingularPostselection";
    case ErrorKind::IndeterminateAtOrigin: return "IndeterminateAtOrigin";
    case ErrorKind::NonMonotoneCDF: return "NonMonotoneCDF";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
/// InvalidParams marks rejected input; the other kinds are domain errors of
/// an otherwise well-formed model.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace decaylife
