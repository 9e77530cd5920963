#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace intelliad {

enum class ErrorCode {
  // ad-catalog-inspector
  MalformedCatalog,
  UnreadableInput,
  DexParseError,
  UnsupportedInputKind,
  // trace-profiler
  MalformedLine,
  NonMonotonicTimestamp,
  SampleBeyondDuration,
  MalformedManifest,
  ZeroDuration,
  EmptySession,
  EmptyRunList,
  // power-model
  MalformedPowerModel,
  NegativeRate,
  UtilizationOutOfRange,
  NoFrequencyBin,
  DegenerateDesign,
  // review-miner
  MalformedReview,
  MalformedKeywordTable,
  DimensionMismatch,
  TooFewPoints,
  UnmappedApp,
  // analytics
  ZeroRequests,
  ZeroImpressions,
  InvalidDataPlan,
  LengthMismatch,
  ConstantSeries,
  TooFewSchemes,
  // simdevice / cli
  InvalidPlan,
  InvalidConfig,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries a machine-checkable code.
/// Line-oriented parsers also record the 1-based line number.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::size_t line = 0)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        line_(line) {}

  ErrorCode code() const noexcept { return code_; }
  std::size_t line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::size_t line_;
};

}  // namespace intelliad
