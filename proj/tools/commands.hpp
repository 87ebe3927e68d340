#pragma once

// Pipeline subcommands behind the `wormwatch` executable. Each takes fully
// resolved options, writes its primary artifact to `out`, and reports
// failures by throwing wormwatch::Error.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "wormwatch/detector.hpp"
#include "wormwatch/synth.hpp"
#include "wormwatch/time_util.hpp"

namespace wormwatch::cli {

enum class InputFormat { Auto, Mrt, Csv };

struct IngestOptions {
  std::vector<std::string> inputs;
  InputFormat format = InputFormat::Auto;
  std::optional<EpochSeconds> from;
  std::optional<EpochSeconds> to;
};

struct TrainOptions {
  std::string input;
  std::string model_out;
  std::optional<std::string> report_out;
  std::optional<EpochSeconds> from;
  std::optional<EpochSeconds> to;
  std::size_t k = 50;
  std::size_t hidden = 100;
  int cycles = 100;
  std::uint64_t seed = 1;
};

struct ScoreOptions {
  std::string input;
  std::string model;
  std::optional<EpochSeconds> from;
  std::optional<EpochSeconds> to;
};

struct DetectOptions {
  std::string input;
  detector::Source source = detector::Source::Autoencoder;
  std::optional<double> threshold;
  double quantile = 0.999;  // used when no threshold is given
  /// Novelty CSV whose quantile sets the threshold; defaults to the input.
  std::optional<std::string> reference;
  std::int64_t gap_minutes = 60;
};

struct CompareOptions {
  std::string ae_report;
  std::string rule_report;
  std::int64_t match_window_minutes = 240;
};

struct TopOptions {
  std::string input;
  std::size_t n = 15;
};

struct SynthOptions {
  std::optional<std::string> scenario_file;
  synth::Scenario scenario;  // overridden by the file when one is given
  std::vector<std::string> extra_surges;
};

void run_ingest(const IngestOptions& opts, std::ostream& out);
/// Writes the model to opts.model_out and a `cycle,loss` CSV to
/// opts.report_out when set; prints a one-line summary to `log`.
void run_train(const TrainOptions& opts, std::ostream& log);
void run_score(const ScoreOptions& opts, std::ostream& out);
/// Returns the threshold actually used.
double run_detect(const DetectOptions& opts, std::ostream& out);
void run_compare(const CompareOptions& opts, std::ostream& out);
void run_top(const TopOptions& opts, std::ostream& out);
void run_synth(const SynthOptions& opts, std::ostream& out);

}  // namespace wormwatch::cli
