#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rsa/error.hpp"
#include "rsa/rdm.hpp"

namespace rsa {
namespace {

ActivationSet single_class_pair(Matrix rows) {
  // class "x" holds `rows`; class "y" holds one filler row
  const std::size_t n = rows.rows();
  Matrix m(n + 1, rows.cols(), 9.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < rows.cols(); ++c) m(r, c) = rows(r, c);
  }
  std::vector<std::size_t> labels(n, 0);
  labels.push_back(1);
  return validate_activation_set(m, labels, {"x", "y"});
}

ActivationSet random_set(std::mt19937_64& rng, std::size_t n, std::size_t units) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::size_t> labels;
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t count = 1 + rng() % 6;
    for (std::size_t k = 0; k < count; ++k) labels.push_back(c);
  }
  Matrix m(labels.size(), units);
  for (double& v : m.data()) v = normal(rng);
  std::vector<std::string> names;
  for (std::size_t c = 0; c < n; ++c) names.push_back("c" + std::to_string(c));
  return validate_activation_set(m, labels, names);
}

TEST(ClassMean, WorkedExamples) {
  EXPECT_EQ(class_mean(single_class_pair(Matrix{{3.0, 4.0}}), 0),
            (std::vector<double>{3.0, 4.0}));
  EXPECT_EQ(class_mean(single_class_pair(Matrix{{0, 0}, {2, 4}}), 0),
            (std::vector<double>{1.0, 2.0}));
  // sequential-sum oracle: (1+1+4)/3 = 2, (1+1+7)/3 = 3
  const auto expected = oracle::sequential_mean({{1, 1}, {1, 1}, {4, 7}});
  EXPECT_EQ(expected, (std::vector<double>{2.0, 3.0}));
  const auto got = class_mean(single_class_pair(Matrix{{1, 1}, {1, 1}, {4, 7}}), 0);
  EXPECT_NEAR(got[0], expected[0], 1e-12);
  EXPECT_NEAR(got[1], expected[1], 1e-12);
  EXPECT_THROW(class_mean(single_class_pair(Matrix{{1, 1}}), 2), Error);
}

TEST(ClassMean, IdenticalRowsReproduceExactly) {
  const auto a = single_class_pair(Matrix{{0.1, 0.7}, {0.1, 0.7}, {0.1, 0.7}});
  EXPECT_EQ(class_mean(a, 0), (std::vector<double>{0.1, 0.7}));
}

TEST(ClassMean, MatchesSequentialSumOnRandomSets) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_set(rng, 3, 8);
    for (std::size_t c = 0; c < a.num_classes(); ++c) {
      const auto sub = class_subset(a, c);
      std::vector<std::vector<double>> rows;
      for (std::size_t r = 0; r < sub.rows(); ++r) rows.emplace_back(sub.row(r).begin(), sub.row(r).end());
      const auto expected = oracle::sequential_mean(rows);
      const auto got = class_mean(a, c);
      for (std::size_t u = 0; u < got.size(); ++u) EXPECT_NEAR(got[u], expected[u], 1e-12);
    }
  }
}

TEST(ComputeRdm, WorkedExamples) {
  // identical vectors: r = 0
  const auto same = compute_rdm(ClassMeans{Matrix{{1, 2, 4}, {1, 2, 4}}, {"a", "b"}});
  EXPECT_EQ(same(0, 0), 0.0);
  EXPECT_NEAR(same(0, 1), 0.0, 1e-15);

  // (1,0) vs (0,1): centered (0.5,-0.5) and (-0.5,0.5), correlation -1
  EXPECT_NEAR(oracle::pearson({1, 0}, {0, 1}), -1.0, 1e-15);
  const auto opposite = compute_rdm(ClassMeans{Matrix{{1, 0}, {0, 1}}, {"a", "b"}});
  EXPECT_DOUBLE_EQ(opposite(0, 1), 2.0);

  // (1,2,3) vs (2,4,6): positive affine, correlation 1
  EXPECT_NEAR(1.0 - oracle::pearson({1, 2, 3}, {2, 4, 6}), 0.0, 1e-15);
  const auto affine = compute_rdm(ClassMeans{Matrix{{1, 2, 3}, {2, 4, 6}}, {"a", "b"}});
  EXPECT_NEAR(affine(0, 1), 0.0, 1e-15);
}

TEST(ComputeRdm, DegenerateMeanIsAnError) {
  try {
    compute_rdm(ClassMeans{Matrix{{5, 5, 5}, {1, 2, 3}}, {"flat", "b"}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateClassMean);
    EXPECT_NE(std::string(e.what()).find("flat"), std::string::npos);
  }
  // constant after floating-point averaging of 0.1
  const auto a = single_class_pair(Matrix{{0.1, 0.1, 0.1}, {0.1, 0.1, 0.1}, {0.1, 0.1, 0.1}});
  EXPECT_THROW(compute_rdm(class_means(a)), Error);
  EXPECT_THROW(compute_rdm(ClassMeans{Matrix{{1}, {2}}, {"a", "b"}}), Error);
}

TEST(ComputeRdm, MatchesBruteForceOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_set(rng, 3 + rng() % 6, 4 + rng() % 20);
    const auto means = class_means(a);
    std::vector<std::vector<double>> rows;
    for (std::size_t c = 0; c < means.values.rows(); ++c) {
      rows.emplace_back(means.values.row(c).begin(), means.values.row(c).end());
    }
    const auto expected = oracle::brute_rdm(rows);
    const auto r = compute_rdm(means);
    for (std::size_t i = 0; i < r.size(); ++i) {
      EXPECT_EQ(r(i, i), 0.0);
      for (std::size_t j = 0; j < r.size(); ++j) {
        EXPECT_EQ(r(i, j), r(j, i));
        EXPECT_NEAR(r(i, j), expected[i][j], 1e-12);
        EXPECT_GE(r(i, j), 0.0);
        EXPECT_LE(r(i, j), 2.0);
      }
    }
  }
}

TEST(ComputeRdm, InvariantToPositiveAffineMaps) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> scale(0.01, 50.0);
  std::uniform_real_distribution<double> shift(-100.0, 100.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_set(rng, 3 + rng() % 5, 4 + rng() % 30);
    const double alpha = scale(rng);
    const double beta = shift(rng);
    Matrix moved = a.values();
    for (double& v : moved.data()) v = alpha * v + beta;
    const auto r0 = compute_rdm(class_means(a));
    const auto r1 = compute_rdm(class_means(a.with_values(moved)));
    for (std::size_t k = 0; k < r0.values().size(); ++k) {
      EXPECT_NEAR(r0.values().data()[k], r1.values().data()[k], 1e-9);
    }
  }
}

TEST(NormalizePerUnit, ZScoresColumns) {
  const auto a = validate_activation_set(Matrix{{1, 5}, {3, 5}, {5, 5}, {7, 5}}, {0, 0, 1, 1},
                                         {"a", "b"});
  const auto z = normalize_per_unit(a);
  double mean = 0.0, ss = 0.0;
  for (std::size_t r = 0; r < 4; ++r) mean += z.values()(r, 0);
  for (std::size_t r = 0; r < 4; ++r) ss += z.values()(r, 0) * z.values()(r, 0);
  EXPECT_NEAR(mean, 0.0, 1e-12);
  EXPECT_NEAR(ss / 4.0, 1.0, 1e-12);
  for (std::size_t r = 0; r < 4; ++r) EXPECT_EQ(z.values()(r, 1), 0.0);
}

}  // namespace
}  // namespace rsa
