#include <random>

#include <gtest/gtest.h>

#include "gradcheck.hpp"
#include "oracles.hpp"
#include "rsa/error.hpp"
#include "rsa/readout.hpp"
#include "rsa/synth.hpp"

namespace rsa {
namespace {

// Two classes at x0 = -1 and x0 = +1 (margin 2), every other coordinate zero.
ActivationSet two_class_margin() {
  Matrix m(40, 3, 0.0);
  std::vector<std::size_t> labels;
  for (std::size_t r = 0; r < 40; ++r) {
    m(r, 0) = r % 2 == 0 ? -1.0 : 1.0;
    labels.push_back(r % 2);
  }
  return validate_activation_set(m, labels, {"neg", "pos"});
}

// Seven well-separated clusters.
ActivationSet separable_seven(std::uint64_t seed) {
  SynthSpec spec;
  spec.units = 16;
  spec.images_per_class = 40;
  spec.within_class_std = 0.3;
  spec.seed = seed;
  Matrix means(7, 16, 0.0);
  for (std::size_t c = 0; c < 7; ++c) {
    means(c, c) = 3.0;
    means(c, 15) = 0.1 * static_cast<double>(c);  // keeps rows non-constant
  }
  spec.class_means = means;
  return generate(spec).data;
}

TEST(TrainSvm, SeparatesMarginInstance) {
  const auto data = two_class_margin();
  const auto model = train_svm(data, 1.0, 10, 0);
  EXPECT_EQ(accuracy(model, data), 1.0);
}

TEST(TrainSvm, ZeroEpochsGivesZeroModel) {
  const auto data = two_class_margin();
  const auto model = train_svm(data, 1.0, 0, 0);
  EXPECT_EQ(model.weights, Matrix(2, 3, 0.0));
  EXPECT_EQ(model.biases, (std::vector<double>{0.0, 0.0}));
  for (auto p : predict(model, data.values())) EXPECT_EQ(p, 0u);
}

TEST(TrainSvm, Deterministic) {
  const auto data = separable_seven(1);
  EXPECT_EQ(train_svm(data, 0.5, 5, 3), train_svm(data, 0.5, 5, 3));
  EXPECT_NE(train_svm(data, 0.5, 5, 3), train_svm(data, 0.5, 5, 4));
}

TEST(TrainSvm, RejectsBadInputs) {
  const auto data = two_class_margin();
  EXPECT_THROW(train_svm(data, 0.0, 5, 0), Error);
  const auto one = validate_activation_set(Matrix{{1, 2}, {2, 1}}, {0, 0}, {"only"});
  EXPECT_THROW(train_svm(one, 1.0, 5, 0), Error);
}

TEST(Predict, TieBreakAndDirection) {
  LinearSVMModel zero{Matrix(3, 2, 0.0), {0, 0, 0}};
  for (auto p : predict(zero, Matrix{{1, 2}, {-3, 4}})) EXPECT_EQ(p, 0u);
  LinearSVMModel favor{Matrix{{0, 0}, {1, 1}}, {0, 0}};
  EXPECT_EQ(predict(favor, Matrix{{0.5, 2.0}}), (std::vector<std::size_t>{1}));
  EXPECT_THROW(predict(zero, Matrix(1, 3)), Error);
}

TEST(Predict, AgreesWithScoreLoopOracle) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t classes = 2 + rng() % 6;
    const std::size_t units = 1 + rng() % 10;
    LinearSVMModel m{gradcheck::random_matrix(rng, classes, units, -1, 1), {}};
    for (std::size_t c = 0; c < classes; ++c) m.biases.push_back(std::uniform_real_distribution<double>(-1, 1)(rng));
    const auto x = gradcheck::random_matrix(rng, 20, units, -2, 2);
    const auto got = predict(m, x);
    for (std::size_t r = 0; r < x.rows(); ++r) {
      std::size_t best = 0;
      double best_score = -1e300;
      for (std::size_t c = 0; c < classes; ++c) {
        double s = m.biases[c];
        for (std::size_t u = 0; u < units; ++u) s += m.weights(c, u) * x(r, u);
        if (s > best_score) {
          best_score = s;
          best = c;
        }
      }
      EXPECT_EQ(got[r], best);
    }
  }
}

TEST(Accuracy, PerfectAndChance) {
  const auto data = two_class_margin();
  LinearSVMModel perfect{Matrix{{-1, 0, 0}, {1, 0, 0}}, {0, 0}};
  EXPECT_EQ(accuracy(perfect, data), 1.0);

  std::vector<std::size_t> labels;
  for (std::size_t r = 0; r < 70; ++r) labels.push_back(r % 7);
  std::vector<std::string> names;
  for (int c = 0; c < 7; ++c) names.push_back("k" + std::to_string(c));
  const auto balanced = validate_activation_set(Matrix(70, 4, 1.0), labels, names);
  LinearSVMModel zero{Matrix(7, 4, 0.0), std::vector<double>(7, 0.0)};
  EXPECT_EQ(accuracy(zero, balanced), 1.0 / 7.0);
}

TEST(Accuracy, SeparableSevenClassHoldout) {
  const auto data = separable_seven(2);
  const auto split = stratified_split(data, 0.7, 5);
  const auto model = train_svm(split.train, 1.0, 20, 5);
  EXPECT_GE(accuracy(model, split.test), 0.95);
}

TEST(HingeSubgradient, MatchesFiniteDifferencesWhereSmooth) {
  const Matrix x{{1.0, 2.0}, {-0.5, 1.5}, {2.0, -1.0}, {0.3, 0.2}};
  const std::vector<double> y{1, -1, 1, -1};
  const double lambda = 0.1;
  const std::vector<double> w{0.2, -0.1};
  const double b = 0.05;
  // all margins stay away from 1, so the objective is smooth here
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const double margin = y[r] * (w[0] * x(r, 0) + w[1] * x(r, 1) + b);
    ASSERT_GT(std::abs(margin - 1.0), 1e-3);
  }
  std::vector<double> grad_w(2, 0.0), g(2);
  double grad_b = 0.0;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    grad_b += hinge_subgradient(w, b, x.row(r), y[r], lambda, g) / 4.0;
    for (int k = 0; k < 2; ++k) grad_w[k] += g[k] / 4.0;
  }
  auto objective = [&](const std::vector<double>& p) {
    return svm_objective(std::vector<double>{p[0], p[1]}, p[2], x, y, lambda);
  };
  const std::vector<double> params{w[0], w[1], b};
  EXPECT_NEAR(oracle::central_difference(objective, params, 0, 1e-6), grad_w[0], 1e-5);
  EXPECT_NEAR(oracle::central_difference(objective, params, 1, 1e-6), grad_w[1], 1e-5);
  EXPECT_NEAR(oracle::central_difference(objective, params, 2, 1e-6), grad_b, 1e-5);
}

TEST(TrainSvm, FeatureScalingWithRescaledCostKeepsPredictions) {
  const auto data = separable_seven(3);
  for (double s : {0.5, 4.0}) {
    Matrix scaled = data.values();
    for (double& v : scaled.data()) v *= s;
    const auto scaled_set = data.with_values(scaled);
    const auto a = train_svm(data, 1.0, 20, 1);
    const auto b = train_svm(scaled_set, 1.0 / (s * s), 20, 1);
    EXPECT_EQ(predict(a, data.values()), predict(b, scaled_set.values()));
  }
}

TEST(CrossValidatedAccuracy, SummarizesSplits) {
  const auto data = separable_seven(4);
  ReadoutOptions options;
  options.splits = 4;
  const auto a = cross_validated_accuracy(data, options);
  const auto b = cross_validated_accuracy(data, options);
  EXPECT_EQ(a.per_split, b.per_split);
  ASSERT_EQ(a.per_split.size(), 4u);
  EXPECT_GE(a.mean, 0.95);
  EXPECT_GE(a.std, 0.0);
}

}  // namespace
}  // namespace rsa
