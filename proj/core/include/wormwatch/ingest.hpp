#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <vector>

#include "wormwatch/time_util.hpp"
#include "wormwatch/timeseries.hpp"
#include "wormwatch/update_record.hpp"

namespace wormwatch::ingest {

namespace mrt {

inline constexpr std::size_t kHeaderSize = 12;

inline constexpr std::uint16_t kTypeBgp4mp = 16;
inline constexpr std::uint16_t kTypeBgp4mpEt = 17;

inline constexpr std::uint16_t kSubtypeMessage = 1;
inline constexpr std::uint16_t kSubtypeMessageAs4 = 4;

inline constexpr std::uint8_t kBgpUpdate = 2;
inline constexpr std::size_t kBgpHeaderSize = 19;

}  // namespace mrt

/// Decodes a concatenation of MRT records and returns one UpdateRecord per
/// BGP UPDATE carried in BGP4MP / BGP4MP_ET MESSAGE(_AS4) records, in stream
/// order. Any other record type, subtype, or BGP message type is skipped.
///
/// Announced counts the classic IPv4 NLRI prefixes and withdrawn counts the
/// Withdrawn Routes prefixes. MP_REACH/MP_UNREACH attributes are not decoded.
///
/// Throws MrtError(TruncatedRecord) when the stream ends mid-record or a
/// declared length overruns its enclosing buffer, and MrtError(MalformedPrefix)
/// for a prefix longer than 32 bits or one whose bytes overrun its field.
std::vector<UpdateRecord> parse_mrt_stream(std::span<const std::uint8_t> bytes);

/// Reads the whole stream and parses it.
std::vector<UpdateRecord> parse_mrt_stream(std::istream& in);

inline constexpr const char* kBucketCsvHeader = "minute_utc,announcements,withdrawals";

/// Reads a bucket CSV. Rows are validated and returned in file order; gaps
/// are preserved (see timeseries::fill_gaps). Accepts LF and CRLF endings.
/// Throws CsvError with BadHeader, BadTimestamp, NegativeCount, NonMonotonic.
std::vector<timeseries::MinuteBucket> read_bucket_csv(std::istream& in);

/// Writes a series as bucket CSV with LF line endings.
void write_bucket_csv(std::ostream& out, const timeseries::MinuteSeries& series);

}  // namespace wormwatch::ingest
