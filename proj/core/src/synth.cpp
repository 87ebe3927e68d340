#include "wormwatch/synth.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <json.hpp>

#include "wormwatch/error.hpp"

namespace wormwatch::synth {

double baseline_rate(double mean, double diurnal_amp, EpochSeconds minute) {
  const auto minute_of_day = static_cast<double>((minute / kMinute) % 1440);
  return mean * (1.0 + diurnal_amp * std::sin(2.0 * std::numbers::pi * minute_of_day / 1440.0));
}

timeseries::MinuteSeries gen_baseline(std::size_t minutes, double mean_a, double mean_w,
                                      double diurnal_amp, std::uint64_t seed,
                                      EpochSeconds start_minute) {
  if (minutes < 1) throw Error(Errc::BadParams, "minutes must be at least 1");
  if (!(mean_a > 0.0) || !(mean_w > 0.0)) throw Error(Errc::BadParams, "means must be positive");
  if (!(diurnal_amp >= 0.0 && diurnal_amp < 1.0))
    throw Error(Errc::BadParams, "diurnal amplitude must lie in [0, 1)");
  if (start_minute < 0 || !is_minute_aligned(start_minute))
    throw Error(Errc::BadParams, "start must be a minute-aligned timestamp");

  std::mt19937_64 rng(seed);
  auto series = timeseries::MinuteSeries::zeros(start_minute, minutes);
  for (std::size_t i = 0; i < minutes; ++i) {
    const EpochSeconds t = series[i].minute_start_s;
    std::poisson_distribution<long long> a(baseline_rate(mean_a, diurnal_amp, t));
    std::poisson_distribution<long long> w(baseline_rate(mean_w, diurnal_amp, t));
    const auto na = a(rng);
    const auto nw = w(rng);
    series.set_counts(i, static_cast<std::uint64_t>(na), static_cast<std::uint64_t>(nw));
  }
  return series;
}

std::optional<Shape> parse_shape(std::string_view text) noexcept {
  if (text == "step") return Shape::Step;
  if (text == "ramp") return Shape::Ramp;
  if (text == "spike") return Shape::Spike;
  return std::nullopt;
}

std::optional<Channels> parse_channels(std::string_view text) noexcept {
  if (text == "announcements") return Channels::Announcements;
  if (text == "withdrawals") return Channels::Withdrawals;
  if (text == "both") return Channels::Both;
  return std::nullopt;
}

double surge_multiplier(const SurgeSpec& spec, EpochSeconds minute) noexcept {
  if (minute < spec.start_minute) return 1.0;
  const std::int64_t offset = (minute - spec.start_minute) / kMinute;
  if (offset >= spec.duration_minutes) return 1.0;
  switch (spec.shape) {
    case Shape::Step: return spec.magnitude;
    case Shape::Ramp:
      return 1.0 + (spec.magnitude - 1.0) * static_cast<double>(offset) /
                       static_cast<double>(spec.duration_minutes);
    case Shape::Spike: return offset == 0 ? spec.magnitude : 1.0;
  }
  return 1.0;
}

timeseries::MinuteSeries inject_surge(timeseries::MinuteSeries series, const SurgeSpec& spec) {
  if (spec.duration_minutes < 1) throw Error(Errc::BadParams, "surge duration must be at least 1");
  if (!(spec.magnitude > 0.0)) throw Error(Errc::BadParams, "surge magnitude must be positive");
  const EpochSeconds last = spec.start_minute + (spec.duration_minutes - 1) * kMinute;
  if (!is_minute_aligned(spec.start_minute) || !series.covers(spec.start_minute, last))
    throw Error(Errc::OutOfRange, "surge window [" + format_iso_utc(spec.start_minute) + ", " +
                                      format_iso_utc(last) + "] is not inside the series");

  const bool scale_a = spec.channels != Channels::Withdrawals;
  const bool scale_w = spec.channels != Channels::Announcements;
  const std::size_t first = *series.index_of(spec.start_minute);
  for (std::size_t i = first; i < first + static_cast<std::size_t>(spec.duration_minutes); ++i) {
    const auto& b = series[i];
    const double m = surge_multiplier(spec, b.minute_start_s);
    auto scale = [m](std::uint64_t c) {
      return static_cast<std::uint64_t>(std::llround(static_cast<double>(c) * m));
    };
    series.set_counts(i, scale_a ? scale(b.announcements) : b.announcements,
                      scale_w ? scale(b.withdrawals) : b.withdrawals);
  }
  return series;
}

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    auto next = text.find(sep, pos);
    parts.push_back(text.substr(pos, next == std::string_view::npos ? next : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return parts;
}

template <typename T>
T parse_number(std::string_view field, const char* name) {
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty())
    throw Error(Errc::BadParams, std::string("bad ") + name + ": '" + std::string(field) + "'");
  return value;
}

EpochSeconds parse_start(std::string_view text) {
  auto t = parse_iso_minute(text);
  if (!t) throw Error(Errc::BadParams, "bad surge start '" + std::string(text) + "'");
  return *t;
}

SurgeSpec make_surge(EpochSeconds start, std::int64_t duration, std::string_view shape,
                     double magnitude, std::string_view channels) {
  SurgeSpec spec;
  spec.start_minute = start;
  spec.duration_minutes = duration;
  auto s = parse_shape(shape);
  if (!s) throw Error(Errc::BadParams, "unknown surge shape '" + std::string(shape) + "'");
  spec.shape = *s;
  spec.magnitude = magnitude;
  auto c = parse_channels(channels);
  if (!c) throw Error(Errc::BadParams, "unknown surge channels '" + std::string(channels) + "'");
  spec.channels = *c;
  if (spec.duration_minutes < 1) throw Error(Errc::BadParams, "surge duration must be at least 1");
  if (!(spec.magnitude > 0.0)) throw Error(Errc::BadParams, "surge magnitude must be positive");
  return spec;
}

}  // namespace

SurgeSpec parse_surge(std::string_view text) {
  auto parts = split(text, ',');
  if (parts.size() != 4 && parts.size() != 5)
    throw Error(Errc::BadParams, "surge must be start,duration,shape,magnitude[,channels]");
  return make_surge(parse_start(parts[0]), parse_number<std::int64_t>(parts[1], "duration"),
                    parts[2], parse_number<double>(parts[3], "magnitude"),
                    parts.size() == 5 ? parts[4] : std::string_view("both"));
}

Scenario read_scenario(std::istream& in) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::BadParams, std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(Errc::BadParams, "scenario is not an object");

  Scenario sc;
  try {
    if (doc.contains("minutes")) sc.minutes = doc["minutes"].get<std::size_t>();
    if (doc.contains("mean_a")) sc.mean_a = doc["mean_a"].get<double>();
    if (doc.contains("mean_w")) sc.mean_w = doc["mean_w"].get<double>();
    if (doc.contains("diurnal_amp")) sc.diurnal_amp = doc["diurnal_amp"].get<double>();
    if (doc.contains("seed")) sc.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("start")) sc.start_minute = parse_start(doc["start"].get<std::string>());
    if (doc.contains("surges")) {
      for (const auto& s : doc["surges"]) {
        sc.surges.push_back(make_surge(parse_start(s.at("start").get<std::string>()),
                                       s.at("duration_minutes").get<std::int64_t>(),
                                       s.at("shape").get<std::string>(),
                                       s.at("magnitude").get<double>(),
                                       s.value("channels", std::string("both"))));
      }
    }
  } catch (const json::exception& e) {
    throw Error(Errc::BadParams, std::string("bad scenario field: ") + e.what());
  }
  return sc;
}

timeseries::MinuteSeries generate(const Scenario& scenario) {
  auto series = gen_baseline(scenario.minutes, scenario.mean_a, scenario.mean_w,
                             scenario.diurnal_amp, scenario.seed, scenario.start_minute);
  for (const auto& s : scenario.surges) series = inject_surge(std::move(series), s);
  return series;
}

}  // namespace wormwatch::synth
