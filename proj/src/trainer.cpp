#include "rsa/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rsa/decov.hpp"
#include "rsa/error.hpp"

namespace rsa {
namespace {

// Layer-wise state kept for backpropagation.
struct ForwardCache {
  std::vector<Matrix> inputs;     // input to layer l
  std::vector<Matrix> rectified;  // relu output of hidden layer l, before dropout
  std::vector<Matrix> masks;      // 0 or 1/(1-p) per element; empty without dropout
  Matrix logits;
};

Matrix affine(const Matrix& x, const Matrix& w, const std::vector<double>& b) {
  Matrix out(x.rows(), w.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto o = out.row(r);
    std::copy(b.begin(), b.end(), o.begin());
    const auto xr = x.row(r);
    for (std::size_t k = 0; k < w.rows(); ++k) {
      const double xv = xr[k];
      if (xv == 0.0) continue;
      const auto wr = w.row(k);
      for (std::size_t c = 0; c < w.cols(); ++c) o[c] += xv * wr[c];
    }
  }
  return out;
}

ForwardCache run_forward(const MLPModel& m, const Matrix& x, double dropout_rate, Rng* rng) {
  validate_model(m);
  if (x.cols() != m.layer_dims.front()) {
    throw Error(ErrorKind::ShapeMismatch, "input has " + std::to_string(x.cols()) +
                                              " columns, model expects " +
                                              std::to_string(m.layer_dims.front()));
  }
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "dropout rate must lie in [0, 1)");
  }
  const bool dropout = dropout_rate > 0.0;
  if (dropout && rng == nullptr) {
    throw Error(ErrorKind::InvalidArgument, "dropout requires a random stream");
  }

  ForwardCache cache;
  Matrix a = x;
  const std::size_t layers = m.num_layers();
  for (std::size_t l = 0; l < layers; ++l) {
    Matrix z = affine(a, m.weights[l], m.biases[l]);
    cache.inputs.push_back(std::move(a));
    if (l + 1 == layers) {
      cache.logits = std::move(z);
      break;
    }
    for (double& v : z.data()) v = v > 0.0 ? v : 0.0;
    Matrix next = z;
    if (dropout) {
      const double scale = 1.0 / (1.0 - dropout_rate);
      std::bernoulli_distribution keep(1.0 - dropout_rate);
      Matrix mask(z.rows(), z.cols());
      for (double& v : mask.data()) v = keep(*rng) ? scale : 0.0;
      for (std::size_t k = 0; k < next.size(); ++k) next.data()[k] *= mask.data()[k];
      cache.masks.push_back(std::move(mask));
    }
    cache.rectified.push_back(std::move(z));
    a = std::move(next);
  }
  return cache;
}

std::size_t argmax_row(std::span<const double> row) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < row.size(); ++c) {
    if (row[c] > row[best]) best = c;
  }
  return best;
}

std::vector<std::size_t> layer_dims_for(const ActivationSet& data, const TrainConfig& cfg) {
  std::vector<std::size_t> dims{data.num_units()};
  dims.insert(dims.end(), cfg.hidden_dims.begin(), cfg.hidden_dims.end());
  dims.push_back(data.num_classes());
  return dims;
}

}  // namespace

std::string_view to_string(Regularizer r) noexcept {
  switch (r) {
    case Regularizer::None: return "none";
    case Regularizer::L1: return "l1";
    case Regularizer::L2: return "l2";
    case Regularizer::DeCov: return "decov";
  }
  return "none";
}

Regularizer parse_regularizer(std::string_view text) {
  if (text == "none") return Regularizer::None;
  if (text == "l1") return Regularizer::L1;
  if (text == "l2") return Regularizer::L2;
  if (text == "decov") return Regularizer::DeCov;
  throw Error(ErrorKind::ConfigInvalid, "unknown regularizer '" + std::string(text) + "'");
}

void validate_model(const MLPModel& m) {
  if (m.layer_dims.size() < 2) {
    throw Error(ErrorKind::ShapeMismatch, "a model needs at least input and output dims");
  }
  if (m.weights.size() != m.layer_dims.size() - 1 || m.biases.size() != m.weights.size()) {
    throw Error(ErrorKind::ShapeMismatch, "layer count does not match layer_dims");
  }
  for (std::size_t l = 0; l < m.weights.size(); ++l) {
    if (m.layer_dims[l] == 0 || m.layer_dims[l + 1] == 0) {
      throw Error(ErrorKind::ShapeMismatch, "layer dims must be positive");
    }
    if (m.weights[l].rows() != m.layer_dims[l] || m.weights[l].cols() != m.layer_dims[l + 1] ||
        m.biases[l].size() != m.layer_dims[l + 1]) {
      throw Error(ErrorKind::ShapeMismatch, "layer " + std::to_string(l) +
                                                " weights or bias have the wrong shape");
    }
  }
}

MLPModel init_model(std::vector<std::size_t> layer_dims, std::uint64_t seed) {
  MLPModel m;
  m.layer_dims = std::move(layer_dims);
  if (m.layer_dims.size() < 2) {
    throw Error(ErrorKind::ShapeMismatch, "a model needs at least input and output dims");
  }
  Rng rng = make_stream(seed, 0);
  for (std::size_t l = 0; l + 1 < m.layer_dims.size(); ++l) {
    const std::size_t fan_in = m.layer_dims[l];
    const std::size_t fan_out = m.layer_dims[l + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> uniform(-limit, limit);
    Matrix w(fan_in, fan_out);
    for (double& v : w.data()) v = uniform(rng);
    m.weights.push_back(std::move(w));
    m.biases.emplace_back(fan_out, 0.0);
  }
  validate_model(m);
  return m;
}

void validate_config(const TrainConfig& cfg) {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::ConfigInvalid, what); };
  if (cfg.hidden_dims.empty()) fail("at least one hidden layer is required");
  for (auto d : cfg.hidden_dims) {
    if (d == 0) fail("hidden layer widths must be positive");
  }
  if (!(cfg.reg_weight >= 0.0) || !std::isfinite(cfg.reg_weight)) fail("reg_weight must be >= 0");
  if (!(cfg.decov_weight >= 0.0) || !std::isfinite(cfg.decov_weight)) {
    fail("decov_weight must be >= 0");
  }
  if (!(cfg.dropout_rate >= 0.0 && cfg.dropout_rate < 1.0)) fail("dropout_rate must lie in [0, 1)");
  if (!(cfg.learning_rate > 0.0) || !std::isfinite(cfg.learning_rate)) {
    fail("learning_rate must be positive");
  }
  if (cfg.batch_size == 0) fail("batch_size must be positive");
  if (cfg.regularizer == Regularizer::DeCov && cfg.batch_size < 2) {
    fail("batch_size must be >= 2 with the decov regularizer");
  }
}

ForwardResult forward(const MLPModel& m, const Matrix& x, double dropout_rate, Rng* rng) {
  auto cache = run_forward(m, x, dropout_rate, rng);
  ForwardResult out;
  out.hidden.reserve(cache.rectified.size());
  // the input to layer l + 1 is hidden layer l after dropout
  for (std::size_t l = 1; l < cache.inputs.size(); ++l) out.hidden.push_back(cache.inputs[l]);
  out.logits = std::move(cache.logits);
  return out;
}

double penalty(Regularizer reg, std::span<const Matrix> weights, double lambda) {
  if (lambda == 0.0) return 0.0;
  double s = 0.0;
  switch (reg) {
    case Regularizer::L1:
      for (const auto& w : weights) {
        for (double v : w.data()) s += std::abs(v);
      }
      return lambda * s;
    case Regularizer::L2:
      for (const auto& w : weights) {
        for (double v : w.data()) s += v * v;
      }
      return 0.5 * lambda * s;
    case Regularizer::None:
    case Regularizer::DeCov:
      return 0.0;
  }
  return 0.0;
}

LossBreakdown loss_and_gradient(const MLPModel& m, const Matrix& x,
                                std::span<const std::size_t> labels, const TrainConfig& cfg,
                                Rng* dropout_rng, ModelGradients* grad) {
  if (labels.size() != x.rows()) {
    throw Error(ErrorKind::ShapeMismatch, "labels and batch rows differ in count");
  }
  const double dropout = cfg.dropout_rate;
  auto cache = run_forward(m, x, dropout, dropout > 0.0 ? dropout_rng : nullptr);
  const std::size_t batch = x.rows();
  const std::size_t classes = m.layer_dims.back();
  const double inv_batch = 1.0 / static_cast<double>(batch);
  const bool use_decov = cfg.regularizer == Regularizer::DeCov && cfg.decov_weight > 0.0;
  const bool use_penalty =
      (cfg.regularizer == Regularizer::L1 || cfg.regularizer == Regularizer::L2) &&
      cfg.reg_weight > 0.0;

  LossBreakdown loss;
  // softmax cross-entropy; dlogits = (softmax - onehot) / batch
  Matrix delta(batch, classes);
  for (std::size_t r = 0; r < batch; ++r) {
    if (labels[r] >= classes) {
      throw Error(ErrorKind::ShapeMismatch, "label " + std::to_string(labels[r]) +
                                                " exceeds output width");
    }
    const auto z = cache.logits.row(r);
    const double zmax = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double v : z) sum += std::exp(v - zmax);
    const double log_norm = zmax + std::log(sum);
    loss.data += (log_norm - z[labels[r]]) * inv_batch;
    auto d = delta.row(r);
    for (std::size_t c = 0; c < classes; ++c) {
      d[c] = std::exp(z[c] - log_norm) * inv_batch;
    }
    d[labels[r]] -= inv_batch;
  }
  if (use_penalty) loss.penalty = penalty(cfg.regularizer, m.weights, cfg.reg_weight);
  if (use_decov) {
    for (const auto& h : cache.rectified) loss.decov += decov_loss_of_batch(h);
    loss.decov *= cfg.decov_weight;
  }
  if (grad == nullptr) return loss;

  const std::size_t layers = m.num_layers();
  grad->weights.assign(layers, Matrix());
  grad->biases.assign(layers, {});
  for (std::size_t l = layers; l-- > 0;) {
    const Matrix& input = cache.inputs[l];
    const Matrix& w = m.weights[l];
    Matrix gw(w.rows(), w.cols(), 0.0);
    std::vector<double> gb(w.cols(), 0.0);
    for (std::size_t r = 0; r < batch; ++r) {
      const auto in = input.row(r);
      const auto d = delta.row(r);
      for (std::size_t k = 0; k < w.rows(); ++k) {
        const double iv = in[k];
        if (iv == 0.0) continue;
        auto g = gw.row(k);
        for (std::size_t c = 0; c < w.cols(); ++c) g[c] += iv * d[c];
      }
      for (std::size_t c = 0; c < w.cols(); ++c) gb[c] += d[c];
    }
    if (use_penalty) {
      for (std::size_t k = 0; k < gw.size(); ++k) {
        const double v = w.data()[k];
        if (cfg.regularizer == Regularizer::L2) {
          gw.data()[k] += cfg.reg_weight * v;
        } else if (v != 0.0) {
          gw.data()[k] += cfg.reg_weight * (v > 0.0 ? 1.0 : -1.0);
        }
      }
    }
    grad->weights[l] = std::move(gw);
    grad->biases[l] = std::move(gb);
    if (l == 0) break;

    // back through dropout, the DeCov term and the rectifier of hidden layer l - 1
    const std::size_t h = l - 1;
    Matrix next(batch, w.rows(), 0.0);
    for (std::size_t r = 0; r < batch; ++r) {
      const auto d = delta.row(r);
      auto o = next.row(r);
      for (std::size_t k = 0; k < w.rows(); ++k) {
        const auto wr = w.row(k);
        double s = 0.0;
        for (std::size_t c = 0; c < w.cols(); ++c) s += wr[c] * d[c];
        o[k] = s;
      }
    }
    if (!cache.masks.empty()) {
      for (std::size_t k = 0; k < next.size(); ++k) next.data()[k] *= cache.masks[h].data()[k];
    }
    if (use_decov) {
      const Matrix gd = decov_gradient(cache.rectified[h]);
      for (std::size_t k = 0; k < next.size(); ++k) {
        next.data()[k] += cfg.decov_weight * gd.data()[k];
      }
    }
    for (std::size_t k = 0; k < next.size(); ++k) {
      if (!(cache.rectified[h].data()[k] > 0.0)) next.data()[k] = 0.0;
    }
    delta = std::move(next);
  }
  return loss;
}

TrainResult train_from(MLPModel model, const ActivationSet& data, const TrainConfig& cfg) {
  validate_config(cfg);
  validate_model(model);
  if (model.layer_dims.front() != data.num_units() ||
      model.layer_dims.back() != data.num_classes()) {
    throw Error(ErrorKind::ShapeMismatch, "model shape does not match the dataset");
  }
  if (model.num_layers() < 2) {
    throw Error(ErrorKind::ShapeMismatch, "model needs at least one hidden layer");
  }

  Rng shuffle_rng = make_stream(cfg.seed, 1);
  Rng dropout_rng = make_stream(cfg.seed, 2);
  const std::size_t n = data.num_images();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  TrainResult result;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    std::vector<std::pair<std::size_t, std::size_t>> batches;
    for (std::size_t begin = 0; begin < n; begin += cfg.batch_size) {
      batches.emplace_back(begin, std::min(n, begin + cfg.batch_size));
    }
    if (batches.size() > 1 && batches.back().second - batches.back().first == 1) {
      batches.pop_back();
      batches.back().second = n;
    }

    double loss_sum = 0.0;
    for (const auto& [begin, end] : batches) {
      Matrix x(end - begin, data.num_units());
      std::vector<std::size_t> labels;
      labels.reserve(end - begin);
      for (std::size_t k = begin; k < end; ++k) {
        const auto src = data.values().row(order[k]);
        std::copy(src.begin(), src.end(), x.row(k - begin).begin());
        labels.push_back(data.labels()[order[k]]);
      }
      ModelGradients g;
      const auto loss = loss_and_gradient(model, x, labels, cfg, &dropout_rng, &g);
      loss_sum += loss.total();
      for (std::size_t l = 0; l < model.num_layers(); ++l) {
        auto w = model.weights[l].data();
        const auto gw = g.weights[l].data();
        for (std::size_t k = 0; k < w.size(); ++k) w[k] -= cfg.learning_rate * gw[k];
        for (std::size_t c = 0; c < model.biases[l].size(); ++c) {
          model.biases[l][c] -= cfg.learning_rate * g.biases[l][c];
        }
      }
    }

    EpochMetrics metrics;
    metrics.loss = loss_sum / static_cast<double>(batches.size());
    metrics.accuracy = predict_accuracy(model, data);
    metrics.offdiag_covariance =
        n >= 2 ? mean_offdiag_squared_covariance(penultimate_activations(model, data.values()))
               : 0.0;
    result.history.push_back(metrics);
  }
  result.model = std::move(model);
  return result;
}

TrainResult train(const ActivationSet& data, const TrainConfig& cfg) {
  validate_config(cfg);
  return train_from(init_model(layer_dims_for(data, cfg), cfg.seed), data, cfg);
}

Matrix penultimate_activations(const MLPModel& m, const Matrix& x) {
  if (m.num_layers() < 2) {
    throw Error(ErrorKind::ShapeMismatch, "model has no hidden layer");
  }
  auto cache = run_forward(m, x, 0.0, nullptr);
  return std::move(cache.rectified.back());
}

ActivationSet penultimate_activations(const MLPModel& m, const ActivationSet& data) {
  return validate_activation_set(penultimate_activations(m, data.values()), data.labels(),
                                 data.class_names());
}

double predict_accuracy(const MLPModel& m, const ActivationSet& data) {
  const auto out = forward(m, data.values(), 0.0);
  std::size_t correct = 0;
  for (std::size_t r = 0; r < data.num_images(); ++r) {
    if (argmax_row(out.logits.row(r)) == data.labels()[r]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.num_images());
}

double fraction_near_zero(const MLPModel& m, double threshold) {
  std::size_t total = 0;
  std::size_t small = 0;
  for (const auto& w : m.weights) {
    for (double v : w.data()) {
      ++total;
      if (std::abs(v) < threshold) ++small;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(small) / static_cast<double>(total);
}

TuneResult tune_regularization(const ActivationSet& data, const TrainConfig& cfg,
                               std::span<const double> grid, double holdout_fraction,
                               std::uint64_t split_seed) {
  if (grid.empty()) throw Error(ErrorKind::ConfigInvalid, "tuning grid is empty");
  if (cfg.regularizer == Regularizer::None) {
    throw Error(ErrorKind::ConfigInvalid, "nothing to tune without a regularizer");
  }
  const auto split = stratified_split(data, 1.0 - holdout_fraction, split_seed);
  TuneResult result;
  double best = -1.0;
  for (double weight : grid) {
    TrainConfig trial = cfg;
    (cfg.regularizer == Regularizer::DeCov ? trial.decov_weight : trial.reg_weight) = weight;
    const auto trained = train(split.train, trial);
    const double acc = predict_accuracy(trained.model, split.test);
    result.holdout_accuracy.push_back(acc);
    if (acc > best) {
      best = acc;
      result.best_weight = weight;
    }
  }
  return result;
}

}  // namespace rsa
