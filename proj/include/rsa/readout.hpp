#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rsa/core.hpp"

namespace rsa {

/// One-vs-rest linear SVM: weights is n_classes x num_units.
struct LinearSVMModel {
  Matrix weights;
  std::vector<double> biases;

  bool operator==(const LinearSVMModel&) const = default;
};

/// Per-example subgradient of the binary SVM objective
///   (lambda / 2) * (|w|^2 + b^2) + max(0, 1 - y (w.x + b))
/// The bias is treated as the weight of a constant feature, so it is
/// regularized too. Writes into grad_w (size of w) and returns the bias part.
double hinge_subgradient(std::span<const double> w, double b, std::span<const double> x,
                         double y, double lambda, std::span<double> grad_w);

/// Full binary objective (lambda / 2) * (|w|^2 + b^2) + mean hinge over rows
/// of x with targets y in {-1, +1}.
double svm_objective(std::span<const double> w, double b, const Matrix& x,
                     std::span<const double> y, double lambda);

/// One binary problem per class, each minimizing
///   (1 / (2c)) * (|w|^2 + b^2) + sum_i hinge_i
/// (equivalently lambda = 1 / (c N) on the mean hinge) by stochastic
/// subgradient descent with step 1 / (lambda t) and projection onto the ball
/// of radius 1 / sqrt(lambda). Each epoch visits every sample once in a
/// seeded order; class k uses the stream (seed, k).
LinearSVMModel train_svm(const ActivationSet& train, double c, std::size_t epochs,
                         std::uint64_t seed);

/// argmax_c (w_c . x + b_c), ties to the lowest class index.
std::vector<std::size_t> predict(const LinearSVMModel& m, const Matrix& x);

double accuracy(const LinearSVMModel& m, const ActivationSet& test);

struct ReadoutOptions {
  double c = 1.0;
  std::size_t epochs = 20;
  std::size_t splits = 10;
  double train_fraction = 0.7;
  std::uint64_t seed = 0;
};

struct AccuracySummary {
  double mean = 0.0;
  double std = 0.0;  ///< population std over splits
  std::vector<double> per_split;
};

/// Repeats train_svm / accuracy over seeded stratified splits; split s uses
/// the split seed derive_seed(seed, s).
AccuracySummary cross_validated_accuracy(const ActivationSet& data,
                                         const ReadoutOptions& options);

}  // namespace rsa
