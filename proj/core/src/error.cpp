#include "wormwatch/error.hpp"

namespace wormwatch {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::TruncatedRecord: return "TruncatedRecord";
    case Errc::MalformedPrefix: return "MalformedPrefix";
    case Errc::BadHeader: return "BadHeader";
    case Errc::BadTimestamp: return "BadTimestamp";
    case Errc::NegativeCount: return "NegativeCount";
    case Errc::NonMonotonic: return "NonMonotonic";
    case Errc::InvalidRange: return "InvalidRange";
    case Errc::EmptySeries: return "EmptySeries";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::BadFormat: return "BadFormat";
    case Errc::VersionMismatch: return "VersionMismatch";
    case Errc::NonFiniteObjective: return "NonFiniteObjective";
    case Errc::Unsorted: return "Unsorted";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::BadQuantile: return "BadQuantile";
    case Errc::BadParams: return "BadParams";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::RangeNotCovered: return "RangeNotCovered";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace wormwatch
