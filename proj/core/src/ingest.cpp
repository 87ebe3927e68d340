#include "wormwatch/ingest.hpp"

#include <charconv>
#include <iterator>
#include <string>
#include <string_view>

#include "wormwatch/error.hpp"

namespace wormwatch::ingest {

namespace {

class Cursor {
public:
  Cursor(std::span<const std::uint8_t> bytes, std::size_t pos, std::size_t end)
      : bytes_(bytes), pos_(pos), end_(end) {}

  std::size_t pos() const noexcept { return pos_; }
  std::size_t end() const noexcept { return end_; }
  std::size_t remaining() const noexcept { return end_ - pos_; }

  void need(std::size_t n, const char* what) const {
    if (remaining() < n) throw MrtError(Errc::TruncatedRecord, pos_, what);
  }

  std::uint8_t u8() { return bytes_[pos_++]; }
  std::uint16_t u16() {
    auto v = static_cast<std::uint16_t>((bytes_[pos_] << 8) | bytes_[pos_ + 1]);
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    auto v = (std::uint32_t{bytes_[pos_]} << 24) | (std::uint32_t{bytes_[pos_ + 1]} << 16) |
             (std::uint32_t{bytes_[pos_ + 2]} << 8) | std::uint32_t{bytes_[pos_ + 3]};
    pos_ += 4;
    return v;
  }
  void skip(std::size_t n) { pos_ += n; }

private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_;
  std::size_t end_;
};

// Counts (length, prefix) tuples in [pos, end).
std::uint64_t count_prefixes(std::span<const std::uint8_t> bytes, std::size_t pos,
                             std::size_t end) {
  std::uint64_t n = 0;
  while (pos < end) {
    std::uint8_t bits = bytes[pos];
    if (bits > 32)
      throw MrtError(Errc::MalformedPrefix, pos,
                     "prefix length " + std::to_string(bits) + " exceeds 32 bits");
    std::size_t octets = (bits + 7u) / 8u;
    if (pos + 1 + octets > end)
      throw MrtError(Errc::MalformedPrefix, pos, "prefix bytes overrun the field");
    pos += 1 + octets;
    ++n;
  }
  return n;
}

// Decodes a BGP message occupying [cur.pos(), cur.end()). Returns false for
// non-UPDATE messages.
bool decode_bgp_message(std::span<const std::uint8_t> bytes, Cursor cur, EpochSeconds ts,
                        UpdateRecord& out) {
  const std::size_t msg_start = cur.pos();
  cur.need(mrt::kBgpHeaderSize, "BGP header");
  cur.skip(16);  // marker
  std::size_t length_pos = cur.pos();
  std::uint16_t length = cur.u16();
  std::uint8_t type = cur.u8();
  if (length < mrt::kBgpHeaderSize)
    throw MrtError(Errc::TruncatedRecord, length_pos, "BGP message length below header size");
  if (msg_start + length > cur.end())
    throw MrtError(Errc::TruncatedRecord, length_pos, "BGP message length overruns the record");
  if (type != mrt::kBgpUpdate) return false;

  const std::size_t msg_end = msg_start + length;
  Cursor body(bytes, cur.pos(), msg_end);

  body.need(2, "withdrawn routes length");
  std::size_t wlen_pos = body.pos();
  std::uint16_t withdrawn_len = body.u16();
  if (body.remaining() < withdrawn_len)
    throw MrtError(Errc::TruncatedRecord, wlen_pos, "withdrawn routes overrun the message");
  std::size_t withdrawn_start = body.pos();
  body.skip(withdrawn_len);

  body.need(2, "path attribute length");
  std::size_t alen_pos = body.pos();
  std::uint16_t attr_len = body.u16();
  if (body.remaining() < attr_len)
    throw MrtError(Errc::TruncatedRecord, alen_pos, "path attributes overrun the message");
  body.skip(attr_len);

  out.timestamp_s = ts;
  out.withdrawn = count_prefixes(bytes, withdrawn_start, withdrawn_start + withdrawn_len);
  out.announced = count_prefixes(bytes, body.pos(), msg_end);
  return true;
}

}  // namespace

std::vector<UpdateRecord> parse_mrt_stream(std::span<const std::uint8_t> bytes) {
  std::vector<UpdateRecord> records;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    Cursor header(bytes, pos, bytes.size());
    header.need(mrt::kHeaderSize, "MRT common header");
    auto ts = static_cast<EpochSeconds>(header.u32());
    std::uint16_t type = header.u16();
    std::uint16_t subtype = header.u16();
    std::uint32_t length = header.u32();
    const std::size_t body_start = header.pos();
    if (header.remaining() < length)
      throw MrtError(Errc::TruncatedRecord, pos, "MRT record length overruns the stream");
    const std::size_t body_end = body_start + length;

    const bool bgp4mp = type == mrt::kTypeBgp4mp || type == mrt::kTypeBgp4mpEt;
    const bool message =
        subtype == mrt::kSubtypeMessage || subtype == mrt::kSubtypeMessageAs4;
    if (bgp4mp && message) {
      Cursor body(bytes, body_start, body_end);
      if (type == mrt::kTypeBgp4mpEt) {
        body.need(4, "BGP4MP_ET microsecond field");
        body.skip(4);  // microseconds, truncated
      }
      const std::size_t as_size = subtype == mrt::kSubtypeMessageAs4 ? 4 : 2;
      body.need(2 * as_size + 4, "BGP4MP peer header");
      body.skip(2 * as_size + 2);  // peer AS, local AS, interface index
      std::uint16_t afi = body.u16();
      std::size_t addr_size = afi == 1 ? 4 : afi == 2 ? 16 : 0;
      if (addr_size != 0) {
        body.need(2 * addr_size, "BGP4MP peer addresses");
        body.skip(2 * addr_size);
        UpdateRecord rec;
        if (decode_bgp_message(bytes, body, ts, rec)) records.push_back(rec);
      }
    }
    pos = body_end;
  }
  return records;
}

std::vector<UpdateRecord> parse_mrt_stream(std::istream& in) {
  std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                  std::istreambuf_iterator<char>()};
  return parse_mrt_stream(std::span<const std::uint8_t>(bytes));
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

std::uint64_t parse_count(std::string_view field, std::size_t line, const char* name) {
  if (!field.empty() && field.front() == '-' && all_digits(field.substr(1)))
    throw CsvError(Errc::NegativeCount, line, std::string(name) + " is negative");
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (!all_digits(field) || ec != std::errc{} || ptr != field.data() + field.size())
    throw CsvError(Errc::BadFormat, line,
                   std::string(name) + " is not a decimal integer: '" + std::string(field) + "'");
  return value;
}

}  // namespace

std::vector<timeseries::MinuteBucket> read_bucket_csv(std::istream& in) {
  std::vector<timeseries::MinuteBucket> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view view(line);
    if (!header_seen) {
      if (view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
      if (view != kBucketCsvHeader)
        throw CsvError(Errc::BadHeader, line_no,
                       "expected header '" + std::string(kBucketCsvHeader) + "'");
      header_seen = true;
      continue;
    }
    if (view.empty()) continue;

    auto c1 = view.find(',');
    auto c2 = c1 == std::string_view::npos ? c1 : view.find(',', c1 + 1);
    if (c2 == std::string_view::npos || view.find(',', c2 + 1) != std::string_view::npos)
      throw CsvError(Errc::BadFormat, line_no, "expected 3 comma-separated fields");

    auto stamp = view.substr(0, c1);
    auto minute = parse_iso_minute(stamp);
    if (!minute)
      throw CsvError(Errc::BadTimestamp, line_no,
                     "'" + std::string(stamp) + "' is not a YYYY-MM-DDTHH:MM:00Z minute");

    timeseries::MinuteBucket b;
    b.minute_start_s = *minute;
    b.announcements = parse_count(view.substr(c1 + 1, c2 - c1 - 1), line_no, "announcements");
    b.withdrawals = parse_count(view.substr(c2 + 1), line_no, "withdrawals");
    if (!rows.empty() && b.minute_start_s <= rows.back().minute_start_s)
      throw CsvError(Errc::NonMonotonic, line_no, "timestamp does not increase");
    rows.push_back(b);
  }
  if (!header_seen) throw CsvError(Errc::BadHeader, 1, "input is empty");
  return rows;
}

void write_bucket_csv(std::ostream& out, const timeseries::MinuteSeries& series) {
  out << kBucketCsvHeader << '\n';
  for (const auto& b : series)
    out << format_iso_utc(b.minute_start_s) << ',' << b.announcements << ',' << b.withdrawals
        << '\n';
}

}  // namespace wormwatch::ingest
