#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nashfund {

enum class ErrorKind {
  EmptyInstance,
  DuplicateProject,
  NegativeUtility,
  ContributionExceedsBudget,
  InvalidValue,
  ProjectMismatch,
  ZeroUtilityAgent,
  MaxItersExceeded,
  NotAtOptimum,
  TooManyAgents,
  UnsupportedInstance,
  SolverFailure,
  LpFailure,
  GroupNotEligible,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyInstance: return "EmptyInstance";
    case ErrorKind::DuplicateProject: return "DuplicateProject";
    case ErrorKind::NegativeUtility: return "NegativeUtility";
    case ErrorKind::ContributionExceedsBudget: return "ContributionExceedsBudget";
    case ErrorKind::InvalidValue: return "InvalidValue";
    case ErrorKind::ProjectMismatch: return "ProjectMismatch";
    case ErrorKind::ZeroUtilityAgent: return "ZeroUtilityAgent";
    case ErrorKind::MaxItersExceeded: return "MaxItersExceeded";
    case ErrorKind::NotAtOptimum: return "NotAtOptimum";
    case ErrorKind::TooManyAgents: return "TooManyAgents";
    case ErrorKind::UnsupportedInstance: return "UnsupportedInstance";
    case ErrorKind::SolverFailure: return "SolverFailure";
    case ErrorKind::LpFailure: return "LpFailure";
    case ErrorKind::GroupNotEligible: return "GroupNotEligible";
  }
  return "Unknown";
}

/// Every library failure is reported through this type; `kind()` tells the
/// caller which contract was broken and `what()` names the offending item.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace nashfund
