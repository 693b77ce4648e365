#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace himc {

enum class ErrorCode {
  ZeroDivision,
  NotImaginary,
  NotUnit,
  GridMismatch,
  InvalidGrid,
  NotComplexStructure,
  NotClosed,
  AllBranch,
  MinimalPoint,
  NotGHIMC,
  ZeroDenominator,
  PathInconsistent,
  SeedConstraintViolated,
  NotClassical,
  DomainError,
  Blowup,
  Degenerate,
  NotRevolution,
  NotConformal,
  ParseError,
  InvalidConfig,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroDivision: return "ZeroDivision";
    case ErrorCode::NotImaginary: return "NotImaginary";
    case ErrorCode::NotUnit: return "NotUnit";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::NotComplexStructure: return "NotComplexStructure";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::AllBranch: return "AllBranch";
    case ErrorCode::MinimalPoint: return "MinimalPoint";
    case ErrorCode::NotGHIMC: return "NotGHIMC";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::PathInconsistent: return "PathInconsistent";
    case ErrorCode::SeedConstraintViolated: return "SeedConstraintViolated";
    case ErrorCode::NotClassical: return "NotClassical";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::Blowup: return "Blowup";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::NotRevolution: return "NotRevolution";
    case ErrorCode::NotConformal: return "NotConformal";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

/// Shortest round-trippable-enough rendering for messages.
inline std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

/// Input problems map to exit code 2, failed numerical certificates to 3.
inline bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::InvalidConfig:
    case ErrorCode::InvalidGrid:
    case ErrorCode::GridMismatch:
    case ErrorCode::DomainError:
    case ErrorCode::NotUnit:
    case ErrorCode::NotImaginary:
    case ErrorCode::ZeroDivision:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace himc
