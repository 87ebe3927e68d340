#include <benchmark/benchmark.h>

#include <random>

#include "support/mrt_builder.hpp"
#include "wormwatch/autoencoder.hpp"
#include "wormwatch/detector.hpp"
#include "wormwatch/features.hpp"
#include "wormwatch/ingest.hpp"
#include "wormwatch/synth.hpp"
#include "wormwatch/timeseries.hpp"

namespace {

using namespace wormwatch;

std::vector<features::WindowSample> quiet_windows(std::size_t minutes, std::size_t k) {
  auto series = synth::gen_baseline(minutes, 1000.0, 400.0, 0.3, 1);
  return features::make_windows(series, k, features::fit_normalization(series));
}

void BM_Forward(benchmark::State& state) {
  auto model = autoencoder::init_model(100, 100, 1);
  auto windows = quiet_windows(200, 50);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(autoencoder::forward(model, windows[i++ % windows.size()].values));
  }
}
BENCHMARK(BM_Forward);

void BM_LossAndGradient(benchmark::State& state) {
  auto model = autoencoder::init_model(100, 100, 1);
  auto windows = quiet_windows(static_cast<std::size_t>(state.range(0)) + 49, 50);
  auto packed = autoencoder::pack(windows, model.input_dim());
  for (auto _ : state) {
    benchmark::DoNotOptimize(autoencoder::sse_loss(model, packed));
    benchmark::DoNotOptimize(autoencoder::gradient(model, packed));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LossAndGradient)->Arg(1440)->Arg(10080)->Unit(benchmark::kMillisecond);

void BM_ScoreSeries(benchmark::State& state) {
  auto model = autoencoder::init_model(100, 100, 1);
  auto windows = quiet_windows(1440 + 49, 50);
  for (auto _ : state) benchmark::DoNotOptimize(detector::score_series(model, windows));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(windows.size()));
}
BENCHMARK(BM_ScoreSeries)->Unit(benchmark::kMillisecond);

void BM_ParseMrt(benchmark::State& state) {
  testing::Bytes stream;
  std::mt19937 rng(3);
  std::uniform_int_distribution<std::size_t> count(0, 20);
  for (std::uint32_t i = 0; i < 10000; ++i)
    testing::append(stream, testing::update_record(996245400 + i, count(rng), count(rng), i % 2 ? 4 : 1));
  for (auto _ : state) benchmark::DoNotOptimize(ingest::parse_mrt_stream(stream));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(stream.size()));
}
BENCHMARK(BM_ParseMrt)->Unit(benchmark::kMillisecond);

void BM_MakeWindows(benchmark::State& state) {
  auto series = synth::gen_baseline(10080, 1000.0, 400.0, 0.3, 1);
  auto norm = features::fit_normalization(series);
  for (auto _ : state) benchmark::DoNotOptimize(features::make_windows(series, 50, norm));
}
BENCHMARK(BM_MakeWindows)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
