#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "gradcheck.hpp"
#include "rsa/decov.hpp"
#include "rsa/error.hpp"
#include "rsa/synth.hpp"
#include "rsa/trainer.hpp"

namespace rsa {
namespace {

ActivationSet clustered(std::uint64_t seed, std::size_t per_class = 20) {
  SynthSpec spec;
  spec.n_classes = 4;
  spec.units = 8;
  spec.images_per_class = per_class;
  spec.seed = seed;
  return generate(spec).data;
}

TEST(Forward, IdentityLayerPassesNonnegativeInput) {
  MLPModel m;
  m.layer_dims = {3, 3};
  m.weights = {Matrix{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  m.biases = {{0, 0, 0}};
  const Matrix x{{0.5, 2, 0}, {1, 0, 3}};
  EXPECT_EQ(forward(m, x, 0.0).logits, x);
}

TEST(Forward, NoDropoutIgnoresRng) {
  const auto m = init_model({4, 6, 5, 3}, 1);
  std::mt19937_64 g(2);
  const auto x = gradcheck::random_matrix(g, 7, 4, -1, 1);
  Rng rng = make_stream(3, 0);
  const auto a = forward(m, x, 0.0);
  const auto b = forward(m, x, 0.0, &rng);
  EXPECT_EQ(a.logits, b.logits);
  ASSERT_EQ(a.hidden.size(), 2u);
  EXPECT_EQ(a.hidden[1], b.hidden[1]);
}

TEST(Forward, ShapeAndRngErrors) {
  const auto m = init_model({4, 6, 3}, 1);
  EXPECT_THROW(forward(m, Matrix(2, 5), 0.0), Error);
  EXPECT_THROW(forward(m, Matrix(2, 4), 0.5), Error);
}

TEST(Forward, InvertedDropoutIsUnbiased) {
  const auto m = init_model({3, 5, 2}, 4);
  const Matrix x{{0.9, -0.4, 1.3}};
  const auto clean = forward(m, x, 0.0).hidden[0];

  Rng a = make_stream(11, 0);
  Rng b = make_stream(11, 0);
  EXPECT_EQ(forward(m, x, 0.5, &a).hidden[0], forward(m, x, 0.5, &b).hidden[0]);

  Rng rng = make_stream(12, 0);
  std::vector<double> sum(clean.cols(), 0.0);
  const int draws = 10000;
  for (int k = 0; k < draws; ++k) {
    const auto h = forward(m, x, 0.5, &rng).hidden[0];
    for (std::size_t u = 0; u < h.cols(); ++u) {
      EXPECT_TRUE(h(0, u) == 0.0 || h(0, u) == 2.0 * clean(0, u));
      sum[u] += h(0, u);
    }
  }
  for (std::size_t u = 0; u < clean.cols(); ++u) {
    EXPECT_NEAR(sum[u] / draws, clean(0, u), 0.05 * clean(0, u) + 1e-12);
  }
}

TEST(Penalty, WorkedExamples) {
  const std::vector<Matrix> w{Matrix{{1, -2, 3}}};
  EXPECT_EQ(penalty(Regularizer::L1, w, 0.0), 0.0);
  EXPECT_EQ(penalty(Regularizer::L2, w, 0.0), 0.0);
  EXPECT_EQ(penalty(Regularizer::L1, w, 1.0), 6.0);
  EXPECT_EQ(penalty(Regularizer::L2, std::vector<Matrix>{Matrix{{3, 4}}}, 2.0), 25.0);
  EXPECT_EQ(penalty(Regularizer::None, w, 3.0), 0.0);
  EXPECT_EQ(penalty(Regularizer::DeCov, w, 3.0), 0.0);
}

TEST(LossGradient, MatchesFiniteDifferences) {
  for (auto reg : {Regularizer::None, Regularizer::L1, Regularizer::L2, Regularizer::DeCov}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto t = gradcheck::tiny_instance(seed);
      TrainConfig cfg;
      cfg.hidden_dims = {4};
      cfg.dropout_rate = 0.0;
      cfg.regularizer = reg;
      cfg.reg_weight = 0.05;
      cfg.decov_weight = 0.5;
      EXPECT_LT(gradcheck::trainer_max_relative_error(t.model, t.x, t.labels, cfg, 1e-6), 1e-5)
          << to_string(reg) << " seed " << seed;
    }
  }
}

TEST(LossGradient, DeepModelWithDecovOnEveryHiddenLayer) {
  std::mt19937_64 rng(31);
  auto m = init_model({3, 5, 4, 3}, 7);
  // nonzero biases keep pre-activations off the rectifier kink
  std::uniform_real_distribution<double> bias(0.05, 0.3);
  for (auto& b : m.biases) {
    for (double& v : b) v = bias(rng);
  }
  const auto x = gradcheck::random_matrix(rng, 6, 3, -2, 2);
  const std::vector<std::size_t> labels{0, 1, 2, 0, 1, 2};
  TrainConfig cfg;
  cfg.dropout_rate = 0.0;
  cfg.regularizer = Regularizer::DeCov;
  cfg.decov_weight = 1.0;
  const auto loss = loss_and_gradient(m, x, labels, cfg, nullptr, nullptr);
  EXPECT_GT(loss.decov, 0.0);
  EXPECT_LT(gradcheck::trainer_max_relative_error(m, x, labels, cfg, 1e-6), 1e-5);
}

TEST(Train, ZeroEpochsReturnsInitialization) {
  const auto data = clustered(1);
  TrainConfig cfg;
  cfg.hidden_dims = {10, 6};
  cfg.epochs = 0;
  cfg.seed = 42;
  const auto result = train(data, cfg);
  EXPECT_EQ(result.model, init_model({8, 10, 6, 4}, 42));
  EXPECT_TRUE(result.history.empty());
}

TEST(Train, DecovWithZeroWeightMatchesUnregularized) {
  const auto data = clustered(2);
  TrainConfig cfg;
  cfg.hidden_dims = {10};
  cfg.epochs = 3;
  cfg.seed = 5;
  const auto plain = train(data, cfg);
  cfg.regularizer = Regularizer::DeCov;
  cfg.decov_weight = 0.0;
  const auto decov = train(data, cfg);
  EXPECT_EQ(plain.model, decov.model);
}

TEST(Train, DeterministicUnderSeed) {
  const auto data = clustered(3);
  TrainConfig cfg;
  cfg.hidden_dims = {12};
  cfg.epochs = 4;
  cfg.regularizer = Regularizer::L2;
  cfg.reg_weight = 1e-3;
  cfg.seed = 9;
  const auto a = train(data, cfg);
  const auto b = train(data, cfg);
  EXPECT_EQ(a.model, b.model);
  cfg.seed = 10;
  EXPECT_NE(train(data, cfg).model, a.model);
}

TEST(Train, LearnsSeparableClusters) {
  const auto data = clustered(4, 40);
  TrainConfig cfg;
  cfg.hidden_dims = {16};
  cfg.epochs = 30;
  cfg.learning_rate = 0.05;
  cfg.dropout_rate = 0.1;
  cfg.batch_size = 16;
  const auto result = train(data, cfg);
  ASSERT_EQ(result.history.size(), 30u);
  EXPECT_LT(result.history.back().loss, result.history.front().loss);
  EXPECT_GT(result.history.back().accuracy, 0.9);
}

TEST(Train, ConfigErrors) {
  const auto data = clustered(5);
  TrainConfig cfg;
  cfg.dropout_rate = 1.0;
  EXPECT_THROW(train(data, cfg), Error);
  cfg = TrainConfig{};
  cfg.regularizer = Regularizer::DeCov;
  cfg.batch_size = 1;
  EXPECT_THROW(train(data, cfg), Error);
  cfg = TrainConfig{};
  cfg.hidden_dims.clear();
  EXPECT_THROW(train(data, cfg), Error);
  cfg = TrainConfig{};
  EXPECT_THROW(train_from(init_model({8, 4, 3}, 0), data, cfg), Error);
  EXPECT_THROW(parse_regularizer("dropout"), Error);
}

TEST(Penultimate, MatchesForwardHiddenLayer) {
  const auto one = init_model({5, 7, 3}, 3);
  std::mt19937_64 rng(6);
  const auto x = gradcheck::random_matrix(rng, 9, 5, -1, 1);
  EXPECT_EQ(penultimate_activations(one, x), forward(one, x, 0.0).hidden[0]);
  EXPECT_EQ(penultimate_activations(one, x), penultimate_activations(one, x));

  const auto deep = init_model({5, 7, 6, 3}, 4);
  EXPECT_EQ(penultimate_activations(deep, x), forward(deep, x, 0.0).hidden.back());

  const auto data = clustered(6);
  const auto acts = penultimate_activations(init_model({8, 7, 4}, 1), data);
  EXPECT_EQ(acts.labels(), data.labels());
  EXPECT_EQ(acts.num_units(), 7u);
}

TEST(Tune, PicksBestHoldoutWeight) {
  const auto data = clustered(7, 30);
  TrainConfig cfg;
  cfg.hidden_dims = {12};
  cfg.epochs = 10;
  cfg.regularizer = Regularizer::L2;
  const std::vector<double> grid{1e-4, 1e-2, 50.0};
  const auto result = tune_regularization(data, cfg, grid, 0.3, 1);
  ASSERT_EQ(result.holdout_accuracy.size(), 3u);
  const auto best = std::max_element(result.holdout_accuracy.begin(),
                                     result.holdout_accuracy.end());
  EXPECT_EQ(result.best_weight, grid[best - result.holdout_accuracy.begin()]);
  // a huge penalty collapses the weights
  EXPECT_LT(result.holdout_accuracy[2], result.holdout_accuracy[0]);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return 0.5 * (v[(v.size() - 1) / 2] + v[v.size() / 2]);
}

TEST(Statistical, L1LeavesMoreNearZeroWeightsThanL2) {
  std::vector<double> l1, l2;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto data = clustered(100 + seed, 30);
    TrainConfig cfg;
    cfg.hidden_dims = {16};
    cfg.epochs = 30;
    cfg.seed = seed;
    cfg.reg_weight = 0.01;
    cfg.regularizer = Regularizer::L1;
    l1.push_back(fraction_near_zero(train(data, cfg).model));
    cfg.regularizer = Regularizer::L2;
    l2.push_back(fraction_near_zero(train(data, cfg).model));
  }
  EXPECT_GT(median(l1), median(l2));
}

TEST(Statistical, TunedDecovLowersPenultimateCovariance) {
  std::vector<double> base, decov;
  const std::vector<double> grid{1e-4, 1e-3, 1e-2};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto data = clustered(200 + seed, 30);
    TrainConfig cfg;
    cfg.hidden_dims = {16};
    cfg.epochs = 15;
    cfg.seed = seed;
    base.push_back(mean_offdiag_squared_covariance(
        penultimate_activations(train(data, cfg).model, data.values())));
    cfg.regularizer = Regularizer::DeCov;
    cfg.decov_weight = tune_regularization(data, cfg, grid, 0.3, seed).best_weight;
    decov.push_back(mean_offdiag_squared_covariance(
        penultimate_activations(train(data, cfg).model, data.values())));
  }
  EXPECT_LT(median(decov), median(base));
}

}  // namespace
}  // namespace rsa
