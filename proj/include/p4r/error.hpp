#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace p4r {

enum class ErrorKind {
  InexactDivision,
  DomainError,
  Overflow,
  NearPole,
  DegenerateDeterminant,
  NoConvergence,
  NoValidRoot,
  OnBranchCut,
  TrackingLoss,
  MomentViolation,
  SingularPoint,
  BranchMismatch,
  NoCrossing,
  TraceDiverged,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so
/// callers (and the CLI exit-code mapping) can branch on it without parsing
/// messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace p4r
