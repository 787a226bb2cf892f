#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rsa/matrix.hpp"

namespace rsa {

/// Per-image feature vectors (images x units) with a class index per image.
///
/// Instances only come out of validate_activation_set, so every live
/// ActivationSet has matching label count, no empty class, finite values and
/// distinct class names. Immutable after construction.
class ActivationSet {
 public:
  const Matrix& values() const noexcept { return values_; }
  const std::vector<std::size_t>& labels() const noexcept { return labels_; }
  const std::vector<std::string>& class_names() const noexcept { return class_names_; }

  std::size_t num_images() const noexcept { return values_.rows(); }
  std::size_t num_units() const noexcept { return values_.cols(); }
  std::size_t num_classes() const noexcept { return class_names_.size(); }

  /// Number of images carrying each class index.
  std::vector<std::size_t> class_sizes() const;

  /// Subset of rows, in the given order; every class must remain represented.
  ActivationSet select_rows(const std::vector<std::size_t>& rows) const;

  /// Same labels and class names with different values of the same shape.
  ActivationSet with_values(Matrix values) const;

  bool operator==(const ActivationSet&) const = default;

 private:
  friend ActivationSet validate_activation_set(Matrix values, std::vector<std::size_t> labels,
                                               std::vector<std::string> class_names);
  ActivationSet() = default;

  Matrix values_;
  std::vector<std::size_t> labels_;
  std::vector<std::string> class_names_;
};

/// Checks shape, label range, class coverage, finiteness and name uniqueness.
/// Throws Error with kind ShapeMismatch, LabelOutOfRange, EmptyClass,
/// NonFiniteValue or DuplicateClassName.
ActivationSet validate_activation_set(Matrix values, std::vector<std::size_t> labels,
                                      std::vector<std::string> class_names);

/// Rows of `a` whose label equals `class_index`, in original order.
Matrix class_subset(const ActivationSet& a, std::size_t class_index);

/// Row indices of `a` whose label equals `class_index`.
std::vector<std::size_t> class_rows(const ActivationSet& a, std::size_t class_index);

struct Split {
  ActivationSet train;
  ActivationSet test;
};

/// Seeded stratified split: each class sends round(train_fraction * size)
/// images (clamped to [1, size - 1]) to train and the rest to test, keeping
/// original row order within each side. Every class needs at least 2 images.
Split stratified_split(const ActivationSet& a, double train_fraction, std::uint64_t seed);

/// Symmetric n x n dissimilarity matrix with zero diagonal and entries in [0, 2].
class RDM {
 public:
  /// Validates symmetry (exact), diagonal and range (both within 1e-12).
  static RDM from_values(Matrix values, std::vector<std::string> class_names);

  const Matrix& values() const noexcept { return values_; }
  const std::vector<std::string>& class_names() const noexcept { return class_names_; }
  std::size_t size() const noexcept { return class_names_.size(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return values_(i, j); }

  bool operator==(const RDM&) const = default;

 private:
  RDM(Matrix values, std::vector<std::string> class_names)
      : values_(std::move(values)), class_names_(std::move(class_names)) {}

  Matrix values_;
  std::vector<std::string> class_names_;
};

struct SimilarityReport {
  double point_estimate = 0.0;
  double bootstrap_mean = 0.0;
  double bootstrap_std = 0.0;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;

  bool operator==(const SimilarityReport&) const = default;
};

}  // namespace rsa
