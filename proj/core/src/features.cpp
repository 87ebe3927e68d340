#include "wormwatch/features.hpp"

#include <algorithm>

#include "wormwatch/error.hpp"

namespace wormwatch::features {

NormalizationParams fit_normalization(const timeseries::MinuteSeries& series) {
  if (series.empty()) throw Error(Errc::EmptySeries, "cannot fit normalization on no data");
  auto [a_lo, a_hi] = std::minmax_element(
      series.begin(), series.end(),
      [](const auto& x, const auto& y) { return x.announcements < y.announcements; });
  auto [w_lo, w_hi] = std::minmax_element(
      series.begin(), series.end(),
      [](const auto& x, const auto& y) { return x.withdrawals < y.withdrawals; });
  return {static_cast<double>(a_lo->announcements), static_cast<double>(a_hi->announcements),
          static_cast<double>(w_lo->withdrawals), static_cast<double>(w_hi->withdrawals)};
}

std::vector<WindowSample> make_windows(const timeseries::MinuteSeries& series, std::size_t k,
                                       const NormalizationParams& params) {
  if (k == 0) throw Error(Errc::BadParams, "lag count k must be at least 1");
  std::vector<WindowSample> windows;
  if (series.size() < k) return windows;

  std::vector<double> a(series.size()), w(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    a[i] = normalize(static_cast<double>(series[i].announcements), params.a_min, params.a_max);
    w[i] = normalize(static_cast<double>(series[i].withdrawals), params.w_min, params.w_max);
  }

  windows.reserve(series.size() - k + 1);
  for (std::size_t t = k - 1; t < series.size(); ++t) {
    WindowSample s;
    s.end_minute = series[t].minute_start_s;
    s.values.resize(2 * k);
    std::copy_n(a.begin() + static_cast<std::ptrdiff_t>(t + 1 - k), k, s.values.begin());
    std::copy_n(w.begin() + static_cast<std::ptrdiff_t>(t + 1 - k), k,
                s.values.begin() + static_cast<std::ptrdiff_t>(k));
    windows.push_back(std::move(s));
  }
  return windows;
}

}  // namespace wormwatch::features
