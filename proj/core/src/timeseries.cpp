#include "wormwatch/timeseries.hpp"

#include <algorithm>
#include <string>

#include "wormwatch/error.hpp"

namespace wormwatch::timeseries {

namespace {

void require_aligned(EpochSeconds t, const char* what) {
  if (t < 0 || !is_minute_aligned(t))
    throw Error(Errc::InvalidRange, std::string(what) + " is not a minute-aligned timestamp: " +
                                        std::to_string(t));
}

}  // namespace

MinuteSeries MinuteSeries::zeros(EpochSeconds start_minute, std::size_t count) {
  require_aligned(start_minute, "series start");
  MinuteSeries s;
  s.start_ = start_minute;
  s.buckets_.resize(count);
  for (std::size_t i = 0; i < count; ++i)
    s.buckets_[i].minute_start_s = start_minute + static_cast<EpochSeconds>(i) * kMinute;
  return s;
}

MinuteSeries MinuteSeries::from_consecutive(std::vector<MinuteBucket> buckets) {
  MinuteSeries s;
  if (buckets.empty()) return s;
  require_aligned(buckets.front().minute_start_s, "series start");
  for (std::size_t i = 1; i < buckets.size(); ++i) {
    if (buckets[i].minute_start_s != buckets[i - 1].minute_start_s + kMinute)
      throw Error(Errc::InvalidRange, "buckets are not consecutive minutes at index " +
                                          std::to_string(i));
  }
  s.start_ = buckets.front().minute_start_s;
  s.buckets_ = std::move(buckets);
  return s;
}

void MinuteSeries::set_counts(std::size_t i, std::uint64_t announcements,
                              std::uint64_t withdrawals) {
  buckets_.at(i).announcements = announcements;
  buckets_.at(i).withdrawals = withdrawals;
}

bool MinuteSeries::covers(EpochSeconds from_minute, EpochSeconds to_minute) const noexcept {
  return !empty() && from_minute <= to_minute && from_minute >= start_ &&
         to_minute <= last_minute();
}

std::optional<std::size_t> MinuteSeries::index_of(EpochSeconds minute) const noexcept {
  if (empty() || !is_minute_aligned(minute) || minute < start_ || minute > last_minute())
    return std::nullopt;
  return static_cast<std::size_t>((minute - start_) / kMinute);
}

MinuteSeries MinuteSeries::slice(EpochSeconds from_minute, EpochSeconds to_minute) const {
  require_aligned(from_minute, "slice start");
  require_aligned(to_minute, "slice end");
  if (!covers(from_minute, to_minute))
    throw Error(Errc::InvalidRange, "slice [" + format_iso_utc(from_minute) + ", " +
                                        format_iso_utc(to_minute) + "] is not covered");
  auto first = static_cast<std::ptrdiff_t>(*index_of(from_minute));
  auto last = static_cast<std::ptrdiff_t>(*index_of(to_minute));
  MinuteSeries s;
  s.start_ = from_minute;
  s.buckets_.assign(buckets_.begin() + first, buckets_.begin() + last + 1);
  return s;
}

MinuteSeries bucketize(std::span<const ingest::UpdateRecord> records, EpochSeconds start_minute,
                       EpochSeconds end_minute) {
  require_aligned(start_minute, "range start");
  require_aligned(end_minute, "range end");
  if (end_minute < start_minute)
    throw Error(Errc::InvalidRange, "range end precedes range start");

  auto count = static_cast<std::size_t>((end_minute - start_minute) / kMinute + 1);
  auto series = MinuteSeries::zeros(start_minute, count);
  std::vector<MinuteBucket> sums(series.begin(), series.end());
  for (const auto& r : records) {
    if (r.timestamp_s < start_minute || r.timestamp_s >= end_minute + kMinute) continue;
    auto& b = sums[static_cast<std::size_t>((r.timestamp_s - start_minute) / kMinute)];
    b.announcements += r.announced;
    b.withdrawals += r.withdrawn;
  }
  return MinuteSeries::from_consecutive(std::move(sums));
}

MinuteSeries fill_gaps(std::span<const MinuteBucket> rows, std::optional<EpochSeconds> start_minute,
                       std::optional<EpochSeconds> end_minute) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].minute_start_s <= rows[i - 1].minute_start_s)
      throw Error(Errc::InvalidRange, "rows are not strictly ascending at index " +
                                          std::to_string(i));
  }
  for (const auto& r : rows) require_aligned(r.minute_start_s, "row timestamp");

  if (!start_minute) {
    if (rows.empty()) throw Error(Errc::InvalidRange, "no rows and no explicit range");
    start_minute = rows.front().minute_start_s;
  }
  if (!end_minute) {
    if (rows.empty()) throw Error(Errc::InvalidRange, "no rows and no explicit range");
    end_minute = rows.back().minute_start_s;
  }
  require_aligned(*start_minute, "range start");
  require_aligned(*end_minute, "range end");
  if (*end_minute < *start_minute)
    throw Error(Errc::InvalidRange, "range end precedes range start");

  auto count = static_cast<std::size_t>((*end_minute - *start_minute) / kMinute + 1);
  auto series = MinuteSeries::zeros(*start_minute, count);
  for (const auto& r : rows) {
    if (auto idx = series.index_of(r.minute_start_s))
      series.set_counts(*idx, r.announcements, r.withdrawals);
  }
  return series;
}

std::vector<RankedMinute> top_n(const MinuteSeries& series, std::size_t n) {
  std::vector<RankedMinute> ranked;
  ranked.reserve(series.size());
  for (const auto& b : series) ranked.push_back({b.minute_start_s, total_updates(b)});

  auto better = [](const RankedMinute& a, const RankedMinute& b) {
    if (a.total != b.total) return a.total > b.total;
    return a.minute < b.minute;
  };
  n = std::min(n, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(n), ranked.end(),
                    better);
  ranked.resize(n);
  return ranked;
}

}  // namespace wormwatch::timeseries
