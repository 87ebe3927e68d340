#include "wormwatch/detector.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include <json.hpp>

#include "wormwatch/error.hpp"

namespace wormwatch::detector {

const char* to_string(Source source) noexcept {
  return source == Source::Rule ? "rule" : "autoencoder";
}

std::optional<Source> parse_source(std::string_view text) noexcept {
  if (text == "autoencoder") return Source::Autoencoder;
  if (text == "rule") return Source::Rule;
  return std::nullopt;
}

double mean_square_error(std::span<const double> inputs, std::span<const double> outputs) {
  if (inputs.size() != outputs.size() || inputs.empty())
    throw Error(Errc::DimensionMismatch, "input/output lengths differ or are empty");
  double sum = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const double d = outputs[i] - inputs[i];
    sum += d * d;
  }
  return sum / static_cast<double>(inputs.size());
}

double novelty(const autoencoder::AutoencoderModel& model, std::span<const double> x) {
  Eigen::VectorXd y = autoencoder::forward(model, x);
  return mean_square_error(x, std::span<const double>(y.data(), static_cast<std::size_t>(y.size())));
}

double novelty(const autoencoder::AutoencoderModel& model, const features::WindowSample& x) {
  return novelty(model, std::span<const double>(x.values));
}

std::vector<NoveltyPoint> score_series(const autoencoder::AutoencoderModel& model,
                                       std::span<const features::WindowSample> windows) {
  std::vector<NoveltyPoint> points;
  points.reserve(windows.size());
  constexpr std::size_t kBlock = 2048;
  const auto n_dims = static_cast<double>(model.input_dim());
  for (std::size_t start = 0; start < windows.size(); start += kBlock) {
    auto chunk = windows.subspan(start, std::min(kBlock, windows.size() - start));
    const Eigen::MatrixXd x = autoencoder::pack(chunk, model.input_dim());
    Eigen::MatrixXd h = ((model.w1 * x).colwise() + model.b1).array().tanh().matrix();
    Eigen::MatrixXd d = ((model.w2 * h).colwise() + model.b2) - x;
    Eigen::RowVectorXd e = d.colwise().squaredNorm() / n_dims;
    for (std::size_t j = 0; j < chunk.size(); ++j)
      points.push_back({chunk[j].end_minute, e(static_cast<Eigen::Index>(j))});
  }
  return points;
}

std::vector<AlarmEvent> detect_alarms(std::span<const NoveltyPoint> points,
                                      const DetectorConfig& cfg, Source source) {
  if (cfg.group_gap_minutes < 0) throw Error(Errc::BadParams, "group gap must be non-negative");
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i].minute <= points[i - 1].minute)
      throw Error(Errc::Unsorted, "points are not in strictly ascending minute order at index " +
                                      std::to_string(i));

  std::vector<AlarmEvent> events;
  for (const auto& p : points) {
    if (!(p.e > cfg.threshold)) continue;
    if (!events.empty()) {
      auto& last = events.back();
      const std::int64_t quiet = (p.minute - last.end_minute) / kMinute - 1;
      if (quiet <= cfg.group_gap_minutes) {
        last.end_minute = p.minute;
        if (p.e > last.peak_value) {
          last.peak_value = p.e;
          last.peak_minute = p.minute;
        }
        continue;
      }
    }
    events.push_back({p.minute, p.minute, p.minute, p.e, source});
  }
  return events;
}

std::vector<NoveltyPoint> totals_as_points(const timeseries::MinuteSeries& series) {
  std::vector<NoveltyPoint> points;
  points.reserve(series.size());
  for (const auto& b : series)
    points.push_back({b.minute_start_s, static_cast<double>(timeseries::total_updates(b))});
  return points;
}

std::vector<AlarmEvent> rule_alarms(const timeseries::MinuteSeries& series, double threshold,
                                    std::int64_t group_gap_minutes) {
  auto points = totals_as_points(series);
  return detect_alarms(points, {threshold, group_gap_minutes}, Source::Rule);
}

double suggest_threshold(std::span<const NoveltyPoint> points, double q) {
  if (points.empty()) throw Error(Errc::EmptyInput, "no novelty values");
  if (!(q > 0.0 && q <= 1.0)) throw Error(Errc::BadQuantile, "quantile must lie in (0, 1]");

  std::vector<double> values;
  values.reserve(points.size());
  for (const auto& p : points) values.push_back(p.e);

  const auto n = static_cast<double>(values.size());
  const double exact = q * n;
  double rank = std::ceil(exact);
  // q*N lands a hair above an integer when q is not representable.
  if (rank - exact > 1.0 - 1e-9 * std::max(1.0, n)) rank -= 1.0;
  rank = std::clamp(rank, 1.0, n);
  const auto idx = static_cast<std::size_t>(rank) - 1;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(idx), values.end());
  return values[idx];
}

std::vector<LeadMatch> lead_time(std::span<const AlarmEvent> ae_events,
                                 std::span<const AlarmEvent> rule_events,
                                 std::int64_t match_window_minutes) {
  auto check_sorted = [](std::span<const AlarmEvent> ev, const char* name) {
    for (std::size_t i = 1; i < ev.size(); ++i)
      if (ev[i].start_minute < ev[i - 1].start_minute)
        throw Error(Errc::Unsorted, std::string(name) + " events are not sorted by start");
  };
  check_sorted(ae_events, "autoencoder");
  check_sorted(rule_events, "rule");

  const std::int64_t window_s = match_window_minutes * kMinute;
  std::vector<bool> used(rule_events.size(), false);
  std::vector<LeadMatch> matches;
  matches.reserve(ae_events.size());
  for (const auto& ae : ae_events) {
    LeadMatch m{ae, std::nullopt, std::nullopt};
    for (std::size_t j = 0; j < rule_events.size(); ++j) {
      if (used[j]) continue;
      const auto start = rule_events[j].start_minute;
      if (start < ae.start_minute - window_s) continue;
      if (start > ae.start_minute + window_s) break;
      used[j] = true;
      m.rule = rule_events[j];
      m.lead_minutes = (start - ae.start_minute) / kMinute;
      break;
    }
    matches.push_back(m);
  }
  return matches;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

void write_novelty_csv(std::ostream& out, std::span<const NoveltyPoint> points) {
  out << kNoveltyCsvHeader << '\n';
  for (const auto& p : points) out << format_iso_utc(p.minute) << ',' << format_double(p.e) << '\n';
}

std::vector<NoveltyPoint> read_novelty_csv(std::istream& in) {
  std::vector<NoveltyPoint> points;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view view(line);
    if (!header_seen) {
      if (view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
      if (view != kNoveltyCsvHeader)
        throw CsvError(Errc::BadHeader, line_no,
                       "expected header '" + std::string(kNoveltyCsvHeader) + "'");
      header_seen = true;
      continue;
    }
    if (view.empty()) continue;
    auto comma = view.find(',');
    if (comma == std::string_view::npos || view.find(',', comma + 1) != std::string_view::npos)
      throw CsvError(Errc::BadFormat, line_no, "expected 2 comma-separated fields");
    auto minute = parse_iso_minute(view.substr(0, comma));
    if (!minute) throw CsvError(Errc::BadTimestamp, line_no, "bad minute timestamp");
    auto field = view.substr(comma + 1);
    double e = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), e);
    if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(e))
      throw CsvError(Errc::BadFormat, line_no, "novelty is not a finite number");
    if (!points.empty() && *minute <= points.back().minute)
      throw CsvError(Errc::NonMonotonic, line_no, "timestamp does not increase");
    points.push_back({*minute, e});
  }
  if (!header_seen) throw CsvError(Errc::BadHeader, 1, "input is empty");
  return points;
}

void write_alarm_report(std::ostream& out, std::span<const AlarmEvent> events) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& ev : events) {
    doc.push_back({{"start", format_iso_utc(ev.start_minute)},
                   {"end", format_iso_utc(ev.end_minute)},
                   {"peak_minute", format_iso_utc(ev.peak_minute)},
                   {"peak_value", ev.peak_value},
                   {"source", to_string(ev.source)}});
  }
  out << doc.dump(2) << '\n';
}

std::vector<AlarmEvent> read_alarm_report(std::istream& in) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::ordered_json::exception& e) {
    throw Error(Errc::BadFormat, std::string("alarm report is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw Error(Errc::BadFormat, "alarm report is not an array");

  auto minute_field = [](const nlohmann::ordered_json& obj, const char* key) {
    if (!obj.contains(key) || !obj[key].is_string())
      throw Error(Errc::BadFormat, std::string("event is missing '") + key + "'");
    auto t = parse_iso_minute(obj[key].get<std::string>());
    if (!t) throw Error(Errc::BadFormat, std::string("bad timestamp in '") + key + "'");
    return *t;
  };

  std::vector<AlarmEvent> events;
  for (const auto& obj : doc) {
    if (!obj.is_object()) throw Error(Errc::BadFormat, "event is not an object");
    AlarmEvent ev;
    ev.start_minute = minute_field(obj, "start");
    ev.end_minute = minute_field(obj, "end");
    ev.peak_minute = minute_field(obj, "peak_minute");
    if (!obj.contains("peak_value") || !obj["peak_value"].is_number())
      throw Error(Errc::BadFormat, "event is missing 'peak_value'");
    ev.peak_value = obj["peak_value"].get<double>();
    if (!obj.contains("source") || !obj["source"].is_string())
      throw Error(Errc::BadFormat, "event is missing 'source'");
    auto src = parse_source(obj["source"].get<std::string>());
    if (!src) throw Error(Errc::BadFormat, "unknown event source");
    ev.source = *src;
    if (!(ev.start_minute <= ev.peak_minute && ev.peak_minute <= ev.end_minute))
      throw Error(Errc::BadFormat, "event peak lies outside its span");
    events.push_back(ev);
  }
  return events;
}

void write_lead_csv(std::ostream& out, std::span<const LeadMatch> matches) {
  out << kLeadCsvHeader << '\n';
  for (const auto& m : matches) {
    out << format_iso_utc(m.ae.start_minute) << ',';
    if (m.rule) out << format_iso_utc(m.rule->start_minute);
    out << ',';
    if (m.lead_minutes) out << *m.lead_minutes;
    out << '\n';
  }
}

}  // namespace wormwatch::detector
