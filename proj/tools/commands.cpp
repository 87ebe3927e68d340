#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "wormwatch/autoencoder.hpp"
#include "wormwatch/error.hpp"
#include "wormwatch/features.hpp"
#include "wormwatch/ingest.hpp"
#include "wormwatch/timeseries.hpp"
#include "wormwatch/trainer.hpp"

namespace wormwatch::cli {

namespace {

std::ifstream open_input(const std::string& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw Error(Errc::Io, "cannot open '" + path + "'");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::out | std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot write '" + path + "'");
  return out;
}

// Runs fn, prefixing any library error with the file it concerns.
template <typename Fn>
auto with_file_context(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == Errc::Io) throw;
    throw Error(e.code(), path + ": " + e.detail());
  }
}

timeseries::MinuteSeries load_series(const std::string& path,
                                     std::optional<EpochSeconds> from = std::nullopt,
                                     std::optional<EpochSeconds> to = std::nullopt) {
  auto in = open_input(path);
  return with_file_context(path, [&] {
    auto rows = ingest::read_bucket_csv(in);
    return timeseries::fill_gaps(rows, from, to);
  });
}

bool looks_like_csv(const std::string& path) {
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
}

}  // namespace

void run_ingest(const IngestOptions& opts, std::ostream& out) {
  if (opts.inputs.empty()) throw Error(Errc::Io, "no input files");

  std::vector<InputFormat> formats;
  for (const auto& path : opts.inputs) {
    InputFormat f = opts.format;
    if (f == InputFormat::Auto) f = looks_like_csv(path) ? InputFormat::Csv : InputFormat::Mrt;
    formats.push_back(f);
  }
  const bool any_csv = std::count(formats.begin(), formats.end(), InputFormat::Csv) > 0;

  if (any_csv) {
    if (opts.inputs.size() != 1)
      throw Error(Errc::BadParams, "a bucket CSV input cannot be combined with other inputs");
    ingest::write_bucket_csv(out, load_series(opts.inputs.front(), opts.from, opts.to));
    return;
  }

  std::vector<ingest::UpdateRecord> records;
  for (const auto& path : opts.inputs) {
    auto in = open_input(path, std::ios::in | std::ios::binary);
    auto part = with_file_context(path, [&] { return ingest::parse_mrt_stream(in); });
    records.insert(records.end(), part.begin(), part.end());
  }

  std::optional<EpochSeconds> from = opts.from, to = opts.to;
  if (!records.empty()) {
    auto [lo, hi] = std::minmax_element(
        records.begin(), records.end(),
        [](const auto& a, const auto& b) { return a.timestamp_s < b.timestamp_s; });
    if (!from) from = floor_minute(lo->timestamp_s);
    if (!to) to = floor_minute(hi->timestamp_s);
  }
  if (!from || !to) {
    out << ingest::kBucketCsvHeader << '\n';
    return;
  }
  ingest::write_bucket_csv(out, timeseries::bucketize(records, *from, *to));
}

void run_train(const TrainOptions& opts, std::ostream& log) {
  auto series = load_series(opts.input);
  const EpochSeconds from = opts.from.value_or(series.start_minute());
  const EpochSeconds to = opts.to.value_or(series.last_minute());
  if (!is_minute_aligned(from) || !is_minute_aligned(to) || !series.covers(from, to))
    throw Error(Errc::RangeNotCovered, "training range [" + format_iso_utc(from) + ", " +
                                           format_iso_utc(to) + "] is not covered by '" +
                                           opts.input + "' [" +
                                           format_iso_utc(series.start_minute()) + ", " +
                                           format_iso_utc(series.last_minute()) + "]");
  if (opts.k == 0 || opts.hidden == 0) throw Error(Errc::BadParams, "--k and --hidden must be positive");

  auto train_series = series.slice(from, to);
  auto norm = features::fit_normalization(train_series);
  auto windows = features::make_windows(train_series, opts.k, norm);
  if (windows.empty())
    throw Error(Errc::EmptyDataset, "training range has fewer than k = " + std::to_string(opts.k) +
                                        " minutes");

  auto model = autoencoder::init_model(2 * opts.k, opts.hidden, opts.seed);
  model.k = opts.k;
  model.norm = norm;

  scg::ScgConfig cfg;
  cfg.max_cycles = opts.cycles;
  auto result = scg::train(model, windows, cfg);

  {
    auto out = open_output(opts.model_out);
    autoencoder::save_model(out, result.model);
  }
  if (opts.report_out) {
    auto out = open_output(*opts.report_out);
    scg::write_report_csv(out, result.report);
  }
  log << "trained on " << windows.size() << " windows: loss " << result.report.initial_loss
      << " -> " << result.report.final_loss() << " in " << result.report.cycles_run
      << " cycles (" << scg::to_string(result.report.stop_reason) << ")\n";
}

void run_score(const ScoreOptions& opts, std::ostream& out) {
  auto model = [&] {
    auto in = open_input(opts.model);
    return with_file_context(opts.model, [&] { return autoencoder::load_model(in); });
  }();
  auto series = load_series(opts.input);
  auto windows = features::make_windows(series, model.k, model.norm);
  std::erase_if(windows, [&](const features::WindowSample& w) {
    return (opts.from && w.end_minute < *opts.from) || (opts.to && w.end_minute > *opts.to);
  });
  auto points = detector::score_series(model, windows);
  detector::write_novelty_csv(out, points);
}

double run_detect(const DetectOptions& opts, std::ostream& out) {
  auto read_novelty = [](const std::string& path) {
    auto in = open_input(path);
    return with_file_context(path, [&] { return detector::read_novelty_csv(in); });
  };
  std::vector<detector::NoveltyPoint> points;
  if (opts.source == detector::Source::Autoencoder) {
    points = read_novelty(opts.input);
  } else {
    points = detector::totals_as_points(load_series(opts.input));
  }

  double threshold = 0.0;
  if (opts.threshold) {
    threshold = *opts.threshold;
  } else if (opts.reference) {
    auto ref = read_novelty(*opts.reference);
    threshold = with_file_context(*opts.reference,
                                  [&] { return detector::suggest_threshold(ref, opts.quantile); });
  } else if (points.empty()) {
    detector::write_alarm_report(out, {});
    return threshold;
  } else {
    threshold = detector::suggest_threshold(points, opts.quantile);
  }
  auto events = detector::detect_alarms(points, {threshold, opts.gap_minutes}, opts.source);
  detector::write_alarm_report(out, events);
  return threshold;
}

void run_compare(const CompareOptions& opts, std::ostream& out) {
  auto read = [](const std::string& path) {
    auto in = open_input(path);
    return with_file_context(path, [&] { return detector::read_alarm_report(in); });
  };
  auto ae = read(opts.ae_report);
  auto rule = read(opts.rule_report);
  auto matches = detector::lead_time(ae, rule, opts.match_window_minutes);
  detector::write_lead_csv(out, matches);
}

void run_top(const TopOptions& opts, std::ostream& out) {
  auto series = load_series(opts.input);
  auto ranked = timeseries::top_n(series, opts.n);
  out << "rank,minute_utc,total\n";
  for (std::size_t i = 0; i < ranked.size(); ++i)
    out << i + 1 << ',' << format_iso_utc(ranked[i].minute) << ',' << ranked[i].total << '\n';
}

void run_synth(const SynthOptions& opts, std::ostream& out) {
  synth::Scenario scenario = opts.scenario;
  if (opts.scenario_file) {
    auto in = open_input(*opts.scenario_file);
    scenario = with_file_context(*opts.scenario_file, [&] { return synth::read_scenario(in); });
  }
  for (const auto& text : opts.extra_surges) scenario.surges.push_back(synth::parse_surge(text));
  ingest::write_bucket_csv(out, synth::generate(scenario));
}

}  // namespace wormwatch::cli
