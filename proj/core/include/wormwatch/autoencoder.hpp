#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "wormwatch/features.hpp"

namespace wormwatch::autoencoder {

inline constexpr int kFormatVersion = 1;

/// Auto-associative two-layer perceptron:
///
///   y = w2 * tanh(w1 * x + b1) + b2
///
/// with input and output dimension 2k. Carries the normalization it was
/// trained with so a model file is self-contained for scoring.
struct AutoencoderModel {
  std::size_t k = 0;
  Eigen::MatrixXd w1;  // hidden x input
  Eigen::VectorXd b1;  // hidden
  Eigen::MatrixXd w2;  // input x hidden
  Eigen::VectorXd b2;  // input
  features::NormalizationParams norm;
  int layout_version = features::kLayoutVersion;

  std::size_t input_dim() const noexcept { return static_cast<std::size_t>(w1.cols()); }
  std::size_t hidden_dim() const noexcept { return static_cast<std::size_t>(w1.rows()); }
  std::size_t parameter_count() const noexcept {
    return static_cast<std::size_t>(w1.size() + b1.size() + w2.size() + b2.size());
  }
};

/// Weights ~ N(0, 1/fan_in) per receiving layer, zero biases. k is set to
/// input_dim / 2. Deterministic for a given seed.
AutoencoderModel init_model(std::size_t input_dim, std::size_t hidden_dim, std::uint64_t seed);

/// Throws Error(DimensionMismatch) when x has the wrong length.
Eigen::VectorXd forward(const AutoencoderModel& model, std::span<const double> x);

/// Columns are samples. Throws Error(DimensionMismatch) on size mismatch.
Eigen::MatrixXd pack(std::span<const features::WindowSample> samples, std::size_t input_dim);

/// E = 1/2 * sum over samples and dims of (forward(x) - x)^2.
/// Throws Error(EmptyDataset) for no samples.
double sse_loss(const AutoencoderModel& model, std::span<const features::WindowSample> samples);
double sse_loss(const AutoencoderModel& model, const Eigen::MatrixXd& samples);

/// dE/dtheta in flatten() order.
Eigen::VectorXd gradient(const AutoencoderModel& model,
                         std::span<const features::WindowSample> samples);
Eigen::VectorXd gradient(const AutoencoderModel& model, const Eigen::MatrixXd& samples);

/// Parameters as one vector: w1 row-major, b1, w2 row-major, b2.
Eigen::VectorXd flatten(const AutoencoderModel& model);

/// Inverse of flatten; throws Error(DimensionMismatch) on a wrongly sized vector.
void unflatten(AutoencoderModel& model, const Eigen::VectorXd& params);

/// Versioned JSON document; doubles are written with round-trip precision.
void save_model(std::ostream& out, const AutoencoderModel& model);
std::string save_model(const AutoencoderModel& model);

/// Throws Error(BadFormat) for unparseable or inconsistent documents and
/// Error(VersionMismatch) for an unsupported format or layout version.
AutoencoderModel load_model(std::istream& in);
AutoencoderModel load_model(const std::string& text);

}  // namespace wormwatch::autoencoder
