#pragma once

#include <span>

#include "wormwatch/autoencoder.hpp"
#include "wormwatch/scg.hpp"

namespace wormwatch::scg {

struct TrainResult {
  autoencoder::AutoencoderModel model;
  TrainReport report;
};

/// Minimizes sse_loss over all model parameters with full-batch SCG. The
/// input model is not modified; the result carries its normalization and k.
/// Throws Error(EmptyDataset) or Error(DimensionMismatch).
TrainResult train(const autoencoder::AutoencoderModel& model,
                  std::span<const features::WindowSample> windows, const ScgConfig& cfg = {});

}  // namespace wormwatch::scg
