// wormwatch: BGP update-volume novelty detection pipeline.
//
// Exit status: 0 success, 1 operational error, 2 usage error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "wormwatch/error.hpp"

namespace {

using namespace wormwatch;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::optional<EpochSeconds> minute_flag(const std::string& text, const char* flag) {
  if (text.empty()) return std::nullopt;
  auto t = parse_iso_minute(text);
  if (!t) throw UsageError(std::string(flag) + " expects YYYY-MM-DDTHH:MM:00Z, got '" + text + "'");
  return t;
}

// Buffers a command's output and writes it to --out (or stdout) on success.
void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::out | std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot write '" + out_path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detect worm-driven BGP routing instability from per-minute update volumes"};
  app.require_subcommand(1);

  std::string from_text, to_text, out_path;
  auto add_range = [&](CLI::App* cmd) {
    cmd->add_option("--from", from_text, "First minute (YYYY-MM-DDTHH:MM:00Z)");
    cmd->add_option("--to", to_text, "Last minute, inclusive");
  };
  auto add_out = [&](CLI::App* cmd, const char* help) {
    cmd->add_option("--out", out_path, help);
  };

  // ingest
  cli::IngestOptions ingest_opts;
  std::string ingest_format = "auto";
  auto* ingest = app.add_subcommand("ingest", "MRT update dumps or a bucket CSV -> gapless bucket CSV");
  ingest->add_option("inputs", ingest_opts.inputs, "MRT files or one bucket CSV")->required();
  ingest->add_option("--format", ingest_format, "auto | mrt | csv")
      ->check(CLI::IsMember({"auto", "mrt", "csv"}));
  add_range(ingest);
  add_out(ingest, "Bucket CSV output (default stdout)");

  // train
  cli::TrainOptions train_opts;
  train_opts.model_out = "model.json";
  std::string report_path;
  auto* train = app.add_subcommand("train", "Fit the autoencoder on a quiet period");
  train->add_option("input", train_opts.input, "Bucket CSV")->required();
  train->add_option("--k", train_opts.k, "Lag minutes per channel")->capture_default_str();
  train->add_option("--hidden", train_opts.hidden, "Hidden neurons")->capture_default_str();
  train->add_option("--cycles", train_opts.cycles, "SCG training cycles")->capture_default_str();
  train->add_option("--seed", train_opts.seed, "Weight initialization seed")->capture_default_str();
  train->add_option("--report", report_path, "Write the cycle,loss training report here");
  train->add_option("--out", train_opts.model_out, "Model file")->capture_default_str();
  add_range(train);

  // score
  cli::ScoreOptions score_opts;
  auto* score = app.add_subcommand("score", "Bucket CSV + model -> novelty CSV");
  score->add_option("input", score_opts.input, "Bucket CSV")->required();
  score->add_option("--model", score_opts.model, "Model file")->required();
  add_range(score);
  add_out(score, "Novelty CSV output (default stdout)");

  // detect
  cli::DetectOptions detect_opts;
  std::string detect_source = "autoencoder";
  double threshold = 0.0;
  auto* detect = app.add_subcommand("detect", "Threshold alarms from novelty or per-minute totals");
  detect->add_option("input", detect_opts.input, "Novelty CSV (autoencoder) or bucket CSV (rule)")
      ->required();
  detect->add_option("--source", detect_source, "autoencoder | rule")
      ->check(CLI::IsMember({"autoencoder", "rule"}));
  auto* threshold_opt = detect->add_option("--threshold", threshold, "Alarm threshold");
  detect->add_option("--quantile", detect_opts.quantile,
                     "Nearest-rank quantile threshold when --threshold is absent")
      ->capture_default_str()
      ->excludes(threshold_opt);
  std::string reference_path;
  detect->add_option("--reference", reference_path,
                     "Novelty CSV whose quantile sets the threshold (default: the input)")
      ->excludes(threshold_opt);
  detect->add_option("--gap-minutes", detect_opts.gap_minutes, "Merge exceedances this close")
      ->capture_default_str();
  add_out(detect, "Alarm report output (default stdout)");

  // compare
  cli::CompareOptions compare_opts;
  auto* compare = app.add_subcommand("compare", "Lead time of autoencoder alarms over rule alarms");
  compare->add_option("ae_report", compare_opts.ae_report, "Autoencoder alarm report")->required();
  compare->add_option("rule_report", compare_opts.rule_report, "Rule alarm report")->required();
  compare->add_option("--match-window", compare_opts.match_window_minutes,
                      "Matching window in minutes")
      ->capture_default_str();
  add_out(compare, "Lead-time CSV output (default stdout)");

  // top
  cli::TopOptions top_opts;
  auto* top = app.add_subcommand("top", "Highest per-minute update totals");
  top->add_option("input", top_opts.input, "Bucket CSV")->required();
  top->add_option("--n", top_opts.n, "Rows to report")->capture_default_str();
  add_out(top, "CSV output (default stdout)");

  // synth
  cli::SynthOptions synth_opts;
  std::string synth_start;
  std::string scenario_path;
  auto& sc = synth_opts.scenario;
  auto* synth = app.add_subcommand("synth", "Synthetic bucket CSV with optional surges");
  synth->add_option("--minutes", sc.minutes, "Series length")->capture_default_str();
  synth->add_option("--start", synth_start, "First minute (default 2001-06-02T00:00:00Z)");
  synth->add_option("--mean-a", sc.mean_a, "Mean announcements per minute")->capture_default_str();
  synth->add_option("--mean-w", sc.mean_w, "Mean withdrawals per minute")->capture_default_str();
  synth->add_option("--diurnal", sc.diurnal_amp, "Diurnal amplitude in [0,1)")->capture_default_str();
  synth->add_option("--seed", sc.seed, "RNG seed")->capture_default_str();
  synth->add_option("--surge", synth_opts.extra_surges,
                    "start,duration,shape,magnitude[,channels]; repeatable");
  synth->add_option("--scenario", scenario_path, "JSON scenario file");
  add_out(synth, "Bucket CSV output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* cmd = app.get_subcommands().front();
  try {
    auto from = minute_flag(from_text, "--from");
    auto to = minute_flag(to_text, "--to");
    std::ostringstream buffer;

    if (cmd == ingest) {
      ingest_opts.format = ingest_format == "mrt"   ? cli::InputFormat::Mrt
                           : ingest_format == "csv" ? cli::InputFormat::Csv
                                                    : cli::InputFormat::Auto;
      ingest_opts.from = from;
      ingest_opts.to = to;
      cli::run_ingest(ingest_opts, buffer);
    } else if (cmd == train) {
      train_opts.from = from;
      train_opts.to = to;
      if (!report_path.empty()) train_opts.report_out = report_path;
      cli::run_train(train_opts, std::cerr);
      return 0;
    } else if (cmd == score) {
      score_opts.from = from;
      score_opts.to = to;
      cli::run_score(score_opts, buffer);
    } else if (cmd == detect) {
      detect_opts.source = *detector::parse_source(detect_source);
      if (threshold_opt->count() > 0) detect_opts.threshold = threshold;
      if (!reference_path.empty()) detect_opts.reference = reference_path;
      double used = cli::run_detect(detect_opts, buffer);
      std::cerr << "threshold " << used << '\n';
    } else if (cmd == compare) {
      cli::run_compare(compare_opts, buffer);
    } else if (cmd == top) {
      cli::run_top(top_opts, buffer);
    } else if (cmd == synth) {
      if (auto t = minute_flag(synth_start, "--start")) sc.start_minute = *t;
      if (!scenario_path.empty()) synth_opts.scenario_file = scenario_path;
      cli::run_synth(synth_opts, buffer);
    }
    emit(out_path, buffer.str());
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "wormwatch " << cmd->get_name() << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "wormwatch " << cmd->get_name() << ": error: " << e.what() << '\n';
    return 1;
  }
}
