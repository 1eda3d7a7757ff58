/**
 * @file error.hpp
 * @brief Error type shared by every hpceff module.
 */
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hpceff {

enum class ErrorKind {
  // input / validation
  Parse,
  Shape,
  NegativeTime,
  RegionMismatch,
  InvalidArgument,
  NotPureMpi,
  MissingCounters,
  DuplicateResourceCount,
  EmptyInput,
  NonPositivePerf,
  InfeasibleSpec,
  InfeasiblePattern,
  BindingUnsupported,
  // degenerate computation
  DegenerateDenominator,
  MetricOutOfRange,
  ZeroDenominator,
  ZeroPower,
  ZeroPeak,
  // optional data requested but absent
  EmptyWindow,
  MissingPowerData,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Shape: return "ShapeError";
    case ErrorKind::NegativeTime: return "NegativeTime";
    case ErrorKind::RegionMismatch: return "RegionMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotPureMpi: return "NotPureMpi";
    case ErrorKind::MissingCounters: return "MissingCounters";
    case ErrorKind::DuplicateResourceCount: return "DuplicateResourceCount";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::NonPositivePerf: return "NonPositivePerf";
    case ErrorKind::InfeasibleSpec: return "InfeasibleSpec";
    case ErrorKind::InfeasiblePattern: return "InfeasiblePattern";
    case ErrorKind::BindingUnsupported: return "BindingUnsupported";
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::MetricOutOfRange: return "MetricOutOfRange";
    case ErrorKind::ZeroDenominator: return "ZeroDenominator";
    case ErrorKind::ZeroPower: return "ZeroPower";
    case ErrorKind::ZeroPeak: return "ZeroPeak";
    case ErrorKind::EmptyWindow: return "EmptyWindow";
    case ErrorKind::MissingPowerData: return "MissingPowerData";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Process exit code for an error: 2 input/validation, 3 degenerate
/// computation, 4 missing optional data.
constexpr int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateDenominator:
    case ErrorKind::MetricOutOfRange:
    case ErrorKind::ZeroDenominator:
    case ErrorKind::ZeroPower:
    case ErrorKind::ZeroPeak:
      return 3;
    case ErrorKind::EmptyWindow:
    case ErrorKind::MissingPowerData:
      return 4;
    default:
      return 2;
  }
}

}  // namespace hpceff
