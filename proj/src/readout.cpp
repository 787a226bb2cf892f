#include "rsa/readout.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rsa/error.hpp"
#include "rsa/parallel.hpp"
#include "rsa/random.hpp"

namespace rsa {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

}  // namespace

double hinge_subgradient(std::span<const double> w, double b, std::span<const double> x,
                         double y, double lambda, std::span<double> grad_w) {
  const bool active = y * (dot(w, x) + b) < 1.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    grad_w[k] = lambda * w[k] - (active ? y * x[k] : 0.0);
  }
  return lambda * b - (active ? y : 0.0);
}

double svm_objective(std::span<const double> w, double b, const Matrix& x,
                     std::span<const double> y, double lambda) {
  double hinge = 0.0;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    hinge += std::max(0.0, 1.0 - y[r] * (dot(w, x.row(r)) + b));
  }
  return 0.5 * lambda * (dot(w, w) + b * b) + hinge / static_cast<double>(x.rows());
}

LinearSVMModel train_svm(const ActivationSet& train, double c, std::size_t epochs,
                         std::uint64_t seed) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw Error(ErrorKind::InvalidArgument, "SVM cost c must be positive");
  }
  if (train.num_classes() < 2) {
    throw Error(ErrorKind::TooFewClasses, "readout needs at least 2 classes");
  }
  const std::size_t n = train.num_images();
  const std::size_t d = train.num_units();
  const double lambda = 1.0 / (c * static_cast<double>(n));
  const double radius = 1.0 / std::sqrt(lambda);

  LinearSVMModel model{Matrix(train.num_classes(), d, 0.0),
                       std::vector<double>(train.num_classes(), 0.0)};
  parallel_for(train.num_classes(), [&](std::size_t cls) {
    Rng rng = make_stream(seed, cls);
    std::vector<double> w(d, 0.0);
    std::vector<double> grad(d, 0.0);
    double b = 0.0;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    double t = 0.0;
    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
      std::shuffle(order.begin(), order.end(), rng);
      for (auto r : order) {
        t += 1.0;
        const double eta = 1.0 / (lambda * t);
        const double y = train.labels()[r] == cls ? 1.0 : -1.0;
        const double gb = hinge_subgradient(w, b, train.values().row(r), y, lambda, grad);
        for (std::size_t k = 0; k < d; ++k) w[k] -= eta * grad[k];
        b -= eta * gb;
        const double norm = std::sqrt(dot(w, w) + b * b);
        if (norm > radius) {
          const double shrink = radius / norm;
          for (auto& v : w) v *= shrink;
          b *= shrink;
        }
      }
    }
    std::copy(w.begin(), w.end(), model.weights.row(cls).begin());
    model.biases[cls] = b;
  });
  return model;
}

std::vector<std::size_t> predict(const LinearSVMModel& m, const Matrix& x) {
  if (x.cols() != m.weights.cols() || m.biases.size() != m.weights.rows()) {
    throw Error(ErrorKind::ShapeMismatch, "input has " + std::to_string(x.cols()) +
                                              " columns, model expects " +
                                              std::to_string(m.weights.cols()));
  }
  std::vector<std::size_t> out(x.rows(), 0);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    double best = 0.0;
    for (std::size_t cls = 0; cls < m.weights.rows(); ++cls) {
      const double score = dot(m.weights.row(cls), x.row(r)) + m.biases[cls];
      if (cls == 0 || score > best) {
        best = score;
        out[r] = cls;
      }
    }
  }
  return out;
}

double accuracy(const LinearSVMModel& m, const ActivationSet& test) {
  if (test.num_classes() != m.weights.rows()) {
    throw Error(ErrorKind::ShapeMismatch, "test set has " +
                                              std::to_string(test.num_classes()) +
                                              " classes, model has " +
                                              std::to_string(m.weights.rows()));
  }
  const auto predicted = predict(m, test.values());
  std::size_t correct = 0;
  for (std::size_t r = 0; r < predicted.size(); ++r) {
    if (predicted[r] == test.labels()[r]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(predicted.size());
}

AccuracySummary cross_validated_accuracy(const ActivationSet& data,
                                         const ReadoutOptions& options) {
  if (options.splits == 0) throw Error(ErrorKind::InvalidArgument, "splits must be >= 1");
  AccuracySummary summary;
  summary.per_split.assign(options.splits, 0.0);
  for (std::size_t s = 0; s < options.splits; ++s) {
    const std::uint64_t split_seed = derive_seed(options.seed, s);
    const auto split = stratified_split(data, options.train_fraction, split_seed);
    const auto model = train_svm(split.train, options.c, options.epochs, split_seed);
    summary.per_split[s] = accuracy(model, split.test);
  }
  for (double a : summary.per_split) summary.mean += a;
  summary.mean /= static_cast<double>(options.splits);
  double ss = 0.0;
  for (double a : summary.per_split) ss += (a - summary.mean) * (a - summary.mean);
  summary.std = std::sqrt(ss / static_cast<double>(options.splits));
  return summary;
}

}  // namespace rsa
