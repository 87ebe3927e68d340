#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wormwatch {

enum class Errc {
  // ingest
  TruncatedRecord,
  MalformedPrefix,
  BadHeader,
  BadTimestamp,
  NegativeCount,
  NonMonotonic,
  // timeseries
  InvalidRange,
  // features
  EmptySeries,
  // autoencoder
  DimensionMismatch,
  EmptyDataset,
  BadFormat,
  VersionMismatch,
  // scg
  NonFiniteObjective,
  // detector
  Unsorted,
  EmptyInput,
  BadQuantile,
  // synth
  BadParams,
  OutOfRange,
  // pipeline
  RangeNotCovered,
  Io,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the Errc codes.
class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  Errc code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

private:
  Errc code_;
  std::string detail_;
};

/// MRT parse failure; offset is the byte position in the input stream.
class MrtError : public Error {
public:
  MrtError(Errc code, std::size_t offset, const std::string& what)
      : Error(code, what + " at byte offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

/// Bucket/novelty CSV failure; line is 1-based.
class CsvError : public Error {
public:
  CsvError(Errc code, std::size_t line, const std::string& what)
      : Error(code, what + " (line " + std::to_string(line) + ")"), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

}  // namespace wormwatch
