#include "wormwatch/trainer.hpp"

#include "wormwatch/error.hpp"

namespace wormwatch::scg {

TrainResult train(const autoencoder::AutoencoderModel& model,
                  std::span<const features::WindowSample> windows, const ScgConfig& cfg) {
  if (windows.empty()) throw Error(Errc::EmptyDataset, "no training windows");
  const Eigen::MatrixXd data = autoencoder::pack(windows, model.input_dim());

  autoencoder::AutoencoderModel scratch = model;
  auto objective = [&](const Eigen::VectorXd& theta) {
    autoencoder::unflatten(scratch, theta);
    return autoencoder::sse_loss(scratch, data);
  };
  auto grad = [&](const Eigen::VectorXd& theta) {
    autoencoder::unflatten(scratch, theta);
    return autoencoder::gradient(scratch, data);
  };

  auto result = scg_minimize(objective, grad, autoencoder::flatten(model), cfg);
  TrainResult out{model, std::move(result.report)};
  autoencoder::unflatten(out.model, result.x);
  return out;
}

}  // namespace wormwatch::scg
