#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "wormwatch/autoencoder.hpp"
#include "wormwatch/features.hpp"
#include "wormwatch/timeseries.hpp"

namespace wormwatch::detector {

struct NoveltyPoint {
  EpochSeconds minute = 0;  // end minute of the scored window
  double e = 0.0;

  friend bool operator==(const NoveltyPoint&, const NoveltyPoint&) = default;
};

enum class Source { Autoencoder, Rule };

const char* to_string(Source source) noexcept;
std::optional<Source> parse_source(std::string_view text) noexcept;

/// A maximal group of above-threshold minutes.
struct AlarmEvent {
  EpochSeconds start_minute = 0;
  EpochSeconds end_minute = 0;
  EpochSeconds peak_minute = 0;
  double peak_value = 0.0;
  Source source = Source::Autoencoder;

  friend bool operator==(const AlarmEvent&, const AlarmEvent&) = default;
};

struct DetectorConfig {
  double threshold = 0.0;
  std::int64_t group_gap_minutes = 60;
};

/// Mean squared difference over the n paired values: (1/n) sum (t_i - i_i)^2.
/// Throws Error(DimensionMismatch) when the lengths differ or are zero.
double mean_square_error(std::span<const double> inputs, std::span<const double> outputs);

/// Reconstruction novelty of one window.
double novelty(const autoencoder::AutoencoderModel& model, std::span<const double> x);
double novelty(const autoencoder::AutoencoderModel& model, const features::WindowSample& x);

/// One point per window, in order, stamped with the window's end minute.
std::vector<NoveltyPoint> score_series(const autoencoder::AutoencoderModel& model,
                                       std::span<const features::WindowSample> windows);

/// Minutes with value > threshold are exceedances. Exceedances separated by
/// at most group_gap_minutes quiet minutes merge into one event; the peak is
/// the first maximum. Throws Error(Unsorted) unless minutes strictly ascend,
/// Error(BadParams) for a negative gap.
std::vector<AlarmEvent> detect_alarms(std::span<const NoveltyPoint> points,
                                      const DetectorConfig& cfg,
                                      Source source = Source::Autoencoder);

/// Per-minute total updates as points.
std::vector<NoveltyPoint> totals_as_points(const timeseries::MinuteSeries& series);

/// Rule baseline: detect_alarms over per-minute totals, tagged Source::Rule.
std::vector<AlarmEvent> rule_alarms(const timeseries::MinuteSeries& series, double threshold,
                                    std::int64_t group_gap_minutes = 60);

/// Nearest-rank quantile: the ceil(q*N)-th smallest value.
/// Throws Error(EmptyInput) or Error(BadQuantile) unless 0 < q <= 1.
double suggest_threshold(std::span<const NoveltyPoint> points, double q);

struct LeadMatch {
  AlarmEvent ae;
  std::optional<AlarmEvent> rule;
  std::optional<std::int64_t> lead_minutes;  // rule.start - ae.start; positive = autoencoder first
};

/// Greedy earliest-first matching: each autoencoder event takes the earliest
/// unused rule event starting within +/- match_window_minutes of it.
/// Throws Error(Unsorted) when either list is not sorted by start.
std::vector<LeadMatch> lead_time(std::span<const AlarmEvent> ae_events,
                                 std::span<const AlarmEvent> rule_events,
                                 std::int64_t match_window_minutes);

inline constexpr const char* kNoveltyCsvHeader = "minute_utc,novelty";
inline constexpr const char* kLeadCsvHeader = "ae_start,rule_start,lead_minutes";

void write_novelty_csv(std::ostream& out, std::span<const NoveltyPoint> points);
/// Throws CsvError (BadHeader, BadTimestamp, NonMonotonic, BadFormat).
std::vector<NoveltyPoint> read_novelty_csv(std::istream& in);

/// JSON array of {start, end, peak_minute, peak_value, source}.
void write_alarm_report(std::ostream& out, std::span<const AlarmEvent> events);
/// Throws Error(BadFormat).
std::vector<AlarmEvent> read_alarm_report(std::istream& in);

void write_lead_csv(std::ostream& out, std::span<const LeadMatch> matches);

}  // namespace wormwatch::detector
