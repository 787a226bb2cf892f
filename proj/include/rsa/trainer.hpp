#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "rsa/core.hpp"
#include "rsa/random.hpp"

namespace rsa {

enum class Regularizer { None, L1, L2, DeCov };

std::string_view to_string(Regularizer r) noexcept;
/// Accepts "none", "l1", "l2" and "decov".
Regularizer parse_regularizer(std::string_view text);

/// Fully-connected network: rectifier on hidden layers, identity on output.
/// weights[l] is layer_dims[l] x layer_dims[l+1]; a layer computes x W + b.
struct MLPModel {
  std::vector<std::size_t> layer_dims;
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;

  std::size_t num_layers() const noexcept { return weights.size(); }
  bool operator==(const MLPModel&) const = default;
};

/// Throws ShapeMismatch unless the weight and bias shapes follow layer_dims.
void validate_model(const MLPModel& m);

/// Uniform(-sqrt(6/(fan_in+fan_out)), +...) weights and zero biases.
MLPModel init_model(std::vector<std::size_t> layer_dims, std::uint64_t seed);

struct TrainConfig {
  std::vector<std::size_t> hidden_dims{64};
  Regularizer regularizer = Regularizer::None;
  double reg_weight = 0.0;    ///< lambda for l1/l2
  double decov_weight = 0.0;  ///< lambda_decov, summed over hidden layers
  double dropout_rate = 0.2;
  double learning_rate = 0.05;
  std::size_t batch_size = 32;
  std::size_t epochs = 20;
  std::uint64_t seed = 0;
};

/// Throws ConfigInvalid on out-of-range fields.
void validate_config(const TrainConfig& cfg);

struct ForwardResult {
  std::vector<Matrix> hidden;  ///< per hidden layer, after dropout when training
  Matrix logits;
};

/// Feed-forward pass. With dropout_rate > 0 an rng must be supplied and
/// inverted dropout is applied to every hidden layer (keep 1 - p, scale
/// survivors by 1 / (1 - p)). With dropout_rate == 0 the rng is ignored.
ForwardResult forward(const MLPModel& m, const Matrix& x, double dropout_rate,
                      Rng* rng = nullptr);

/// l1: lambda * sum|w|; l2: (lambda / 2) * sum w^2; otherwise 0. Biases are
/// not penalized.
double penalty(Regularizer reg, std::span<const Matrix> weights, double lambda);

struct ModelGradients {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;
};

struct LossBreakdown {
  double data = 0.0;     ///< mean softmax cross-entropy
  double penalty = 0.0;  ///< l1/l2 weight penalty
  double decov = 0.0;    ///< decov_weight * sum of per-layer DeCov losses
  double total() const noexcept { return data + penalty + decov; }
};

/// Total training loss on one batch and, when `grad` is non-null, its exact
/// gradient. DeCov acts on the rectified hidden activations before the
/// dropout mask.
LossBreakdown loss_and_gradient(const MLPModel& m, const Matrix& x,
                                std::span<const std::size_t> labels, const TrainConfig& cfg,
                                Rng* dropout_rng, ModelGradients* grad);

struct EpochMetrics {
  double loss = 0.0;  ///< mean batch total loss over the epoch
  double accuracy = 0.0;
  double offdiag_covariance = 0.0;  ///< mean squared off-diagonal covariance, penultimate layer
};

struct TrainResult {
  MLPModel model;
  std::vector<EpochMetrics> history;
};

/// Mini-batch gradient descent from a given model. Batches are contiguous
/// chunks of a seeded per-epoch shuffle; a trailing chunk of one sample is
/// folded into the previous batch.
TrainResult train_from(MLPModel model, const ActivationSet& data, const TrainConfig& cfg);

/// Trains from init_model([units, hidden..., classes], cfg.seed).
TrainResult train(const ActivationSet& data, const TrainConfig& cfg);

/// Last hidden layer in inference mode.
Matrix penultimate_activations(const MLPModel& m, const Matrix& x);
ActivationSet penultimate_activations(const MLPModel& m, const ActivationSet& data);

double predict_accuracy(const MLPModel& m, const ActivationSet& data);

/// Fraction of weights (biases excluded) with |w| < threshold.
double fraction_near_zero(const MLPModel& m, double threshold = 1e-3);

struct TuneResult {
  double best_weight = 0.0;
  std::vector<double> holdout_accuracy;  ///< one per grid value
};

/// Grid search for reg_weight (l1/l2) or decov_weight (decov) by held-out
/// accuracy on a stratified split. Ties keep the earlier grid value.
TuneResult tune_regularization(const ActivationSet& data, const TrainConfig& cfg,
                               std::span<const double> grid, double holdout_fraction,
                               std::uint64_t split_seed);

}  // namespace rsa
