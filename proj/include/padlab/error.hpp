#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace padlab {

// Every failure the library reports carries one of these codes. The CLI maps
// each code to a distinct process exit status (see tools/cli.cpp).
enum class ErrorCode {
  invalid_input,
  division_by_zero,
  precision_exhausted,
  dimension_mismatch,
  singular_at_precision,
  not_split_at_precision,
  not_diagonalizable,
  no_hyperbolicity,
  domain_error,
  no_convergence,
  level_too_small,
  budget_exceeded,
  support_mismatch,
  symbol_count_mismatch,
  negative_exponent,
  divergent_series,
  negative_gap,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_input: return "InvalidInput";
    case ErrorCode::division_by_zero: return "DivisionByZero";
    case ErrorCode::precision_exhausted: return "PrecisionExhausted";
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::singular_at_precision: return "SingularAtPrecision";
    case ErrorCode::not_split_at_precision: return "NotSplitAtPrecision";
    case ErrorCode::not_diagonalizable: return "NotDiagonalizable";
    case ErrorCode::no_hyperbolicity: return "NoHyperbolicity";
    case ErrorCode::domain_error: return "DomainError";
    case ErrorCode::no_convergence: return "NoConvergence";
    case ErrorCode::level_too_small: return "LevelTooSmall";
    case ErrorCode::budget_exceeded: return "BudgetExceeded";
    case ErrorCode::support_mismatch: return "SupportMismatch";
    case ErrorCode::symbol_count_mismatch: return "SymbolCountMismatch";
    case ErrorCode::negative_exponent: return "NegativeExponent";
    case ErrorCode::divergent_series: return "DivergentSeries";
    case ErrorCode::negative_gap: return "NegativeGap";
  }
  return "Unknown";
}

}  // namespace padlab
