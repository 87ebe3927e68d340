#pragma once

#include <cstddef>
#include <vector>

#include "wormwatch/timeseries.hpp"

namespace wormwatch::features {

/// Window vector layout: k announcement lags oldest->newest, then k withdrawal
/// lags oldest->newest. Persisted with every model.
inline constexpr int kLayoutVersion = 1;
inline constexpr const char* kLayoutName = "announce_then_withdraw_oldest_first";

/// Per-channel min/max bounds fitted on the training range.
struct NormalizationParams {
  double a_min = 0.0;
  double a_max = 0.0;
  double w_min = 0.0;
  double w_max = 0.0;

  friend bool operator==(const NormalizationParams&, const NormalizationParams&) = default;
};

struct WindowSample {
  EpochSeconds end_minute = 0;  // inclusive
  std::vector<double> values;   // 2k entries
};

/// Throws Error(EmptySeries) for an empty series.
NormalizationParams fit_normalization(const timeseries::MinuteSeries& series);

/// (value - lo) / (hi - lo), or 0 when hi == lo. Not clamped.
constexpr double normalize(double value, double lo, double hi) noexcept {
  return hi == lo ? 0.0 : (value - lo) / (hi - lo);
}

constexpr double denormalize(double value, double lo, double hi) noexcept {
  return lo + value * (hi - lo);
}

/// One stride-1 window per minute index t in [k-1, size); window t covers
/// minutes t-k+1..t. A series shorter than k yields no windows.
/// Throws Error(BadParams) when k == 0.
std::vector<WindowSample> make_windows(const timeseries::MinuteSeries& series, std::size_t k,
                                       const NormalizationParams& params);

}  // namespace wormwatch::features
