#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wormwatch/time_util.hpp"
#include "wormwatch/update_record.hpp"

namespace wormwatch::timeseries {

struct MinuteBucket {
  EpochSeconds minute_start_s = 0;
  std::uint64_t announcements = 0;
  std::uint64_t withdrawals = 0;

  friend bool operator==(const MinuteBucket&, const MinuteBucket&) = default;
};

/// announcements + withdrawals
constexpr std::uint64_t total_updates(const MinuteBucket& b) noexcept {
  return b.announcements + b.withdrawals;
}

/// Gapless run of consecutive one-minute buckets. Bucket i always starts at
/// start_minute() + 60 * i; only the counts are mutable.
class MinuteSeries {
public:
  MinuteSeries() = default;

  /// `count` zero buckets starting at `start_minute` (must be minute-aligned).
  static MinuteSeries zeros(EpochSeconds start_minute, std::size_t count);

  /// Takes ownership of already-consecutive buckets; throws InvalidRange otherwise.
  static MinuteSeries from_consecutive(std::vector<MinuteBucket> buckets);

  EpochSeconds start_minute() const noexcept { return start_; }
  /// Start of the last bucket. Undefined for an empty series.
  EpochSeconds last_minute() const noexcept {
    return start_ + static_cast<EpochSeconds>(buckets_.size() - 1) * kMinute;
  }
  std::size_t size() const noexcept { return buckets_.size(); }
  bool empty() const noexcept { return buckets_.empty(); }

  const MinuteBucket& operator[](std::size_t i) const { return buckets_[i]; }
  std::span<const MinuteBucket> buckets() const noexcept { return buckets_; }
  auto begin() const noexcept { return buckets_.begin(); }
  auto end() const noexcept { return buckets_.end(); }

  void set_counts(std::size_t i, std::uint64_t announcements, std::uint64_t withdrawals);

  bool covers(EpochSeconds from_minute, EpochSeconds to_minute) const noexcept;
  std::optional<std::size_t> index_of(EpochSeconds minute) const noexcept;

  /// Sub-series for the inclusive minute range; throws InvalidRange when it is
  /// misaligned, reversed, or not covered.
  MinuteSeries slice(EpochSeconds from_minute, EpochSeconds to_minute) const;

  friend bool operator==(const MinuteSeries&, const MinuteSeries&) = default;

private:
  EpochSeconds start_ = 0;
  std::vector<MinuteBucket> buckets_;
};

/// Sums record counts into [start_minute, end_minute] (both inclusive bucket
/// starts). Records may be unsorted; those outside the range are dropped and
/// minutes without records hold zeros.
MinuteSeries bucketize(std::span<const ingest::UpdateRecord> records, EpochSeconds start_minute,
                       EpochSeconds end_minute);

/// Builds a gapless series from strictly ascending buckets, inserting zero
/// buckets for missing minutes. Without an explicit range the series spans
/// the first to the last row; with one, rows outside it are dropped.
MinuteSeries fill_gaps(std::span<const MinuteBucket> rows,
                       std::optional<EpochSeconds> start_minute = std::nullopt,
                       std::optional<EpochSeconds> end_minute = std::nullopt);

struct RankedMinute {
  EpochSeconds minute = 0;
  std::uint64_t total = 0;

  friend bool operator==(const RankedMinute&, const RankedMinute&) = default;
};

/// The n largest per-minute totals, descending; ties go to the earlier minute.
std::vector<RankedMinute> top_n(const MinuteSeries& series, std::size_t n);

}  // namespace wormwatch::timeseries
