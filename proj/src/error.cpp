#include "intelliad/error.hpp"

namespace intelliad {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedCatalog: return "MalformedCatalog";
    case ErrorCode::UnreadableInput: return "UnreadableInput";
    case ErrorCode::DexParseError: return "DexParseError";
    case ErrorCode::UnsupportedInputKind: return "UnsupportedInputKind";
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::NonMonotonicTimestamp: return "NonMonotonicTimestamp";
    case ErrorCode::SampleBeyondDuration: return "SampleBeyondDuration";
    case ErrorCode::MalformedManifest: return "MalformedManifest";
    case ErrorCode::ZeroDuration: return "ZeroDuration";
    case ErrorCode::EmptySession: return "EmptySession";
    case ErrorCode::EmptyRunList: return "EmptyRunList";
    case ErrorCode::MalformedPowerModel: return "MalformedPowerModel";
    case ErrorCode::NegativeRate: return "NegativeRate";
    case ErrorCode::UtilizationOutOfRange: return "UtilizationOutOfRange";
    case ErrorCode::NoFrequencyBin: return "NoFrequencyBin";
    case ErrorCode::DegenerateDesign: return "DegenerateDesign";
    case ErrorCode::MalformedReview: return "MalformedReview";
    case ErrorCode::MalformedKeywordTable: return "MalformedKeywordTable";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::UnmappedApp: return "UnmappedApp";
    case ErrorCode::ZeroRequests: return "ZeroRequests";
    case ErrorCode::ZeroImpressions: return "ZeroImpressions";
    case ErrorCode::InvalidDataPlan: return "InvalidDataPlan";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ConstantSeries: return "ConstantSeries";
    case ErrorCode::TooFewSchemes: return "TooFewSchemes";
    case ErrorCode::InvalidPlan: return "InvalidPlan";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace intelliad
