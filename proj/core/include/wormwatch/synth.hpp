#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string_view>
#include <vector>

#include "wormwatch/timeseries.hpp"

namespace wormwatch::synth {

/// 2001-06-02T00:00:00Z, start of the reference quiet training week.
inline constexpr EpochSeconds kDefaultStart = 991440000;

/// Poisson rate for a minute: mean * (1 + amp * sin(2 pi * minute_of_day / 1440)).
double baseline_rate(double mean, double diurnal_amp, EpochSeconds minute);

/// Independent Poisson counts per minute at baseline_rate, deterministic per
/// seed. Throws Error(BadParams) unless minutes >= 1, means > 0 and
/// 0 <= diurnal_amp < 1.
timeseries::MinuteSeries gen_baseline(std::size_t minutes, double mean_a, double mean_w,
                                      double diurnal_amp, std::uint64_t seed,
                                      EpochSeconds start_minute = kDefaultStart);

enum class Shape { Step, Ramp, Spike };
enum class Channels { Announcements, Withdrawals, Both };

struct SurgeSpec {
  EpochSeconds start_minute = 0;
  std::int64_t duration_minutes = 1;
  Shape shape = Shape::Step;
  double magnitude = 1.0;
  Channels channels = Channels::Both;
};

std::optional<Shape> parse_shape(std::string_view text) noexcept;
std::optional<Channels> parse_channels(std::string_view text) noexcept;

/// Multiplier applied at `minute`: step holds `magnitude` across the window,
/// ramp rises as 1 + (magnitude - 1) * j / duration for offset j, spike
/// applies magnitude at the start minute only. 1 outside the surge.
double surge_multiplier(const SurgeSpec& spec, EpochSeconds minute) noexcept;

/// Scales the selected channels by surge_multiplier, rounding to the nearest
/// count. Throws Error(BadParams) for duration < 1 or magnitude <= 0 and
/// Error(OutOfRange) when the window does not lie inside the series.
timeseries::MinuteSeries inject_surge(timeseries::MinuteSeries series, const SurgeSpec& spec);

/// `start,duration,shape,magnitude[,channels]` with start as an ISO minute,
/// e.g. `2001-06-09T12:00:00Z,60,step,10,both`. Throws Error(BadParams).
SurgeSpec parse_surge(std::string_view text);

struct Scenario {
  std::size_t minutes = 10080 + 1440;
  double mean_a = 1000.0;
  double mean_w = 400.0;
  double diurnal_amp = 0.3;
  std::uint64_t seed = 1;
  EpochSeconds start_minute = kDefaultStart;
  std::vector<SurgeSpec> surges;
};

/// JSON scenario: optional keys minutes, mean_a, mean_w, diurnal_amp, seed,
/// start and a `surges` array of {start, duration_minutes, shape, magnitude,
/// channels}. Missing keys keep Scenario defaults. Throws Error(BadParams).
Scenario read_scenario(std::istream& in);

timeseries::MinuteSeries generate(const Scenario& scenario);

}  // namespace wormwatch::synth
