#include "rsa/core.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "rsa/error.hpp"
#include "rsa/random.hpp"

namespace rsa {
namespace {

constexpr double kRdmTolerance = 1e-12;

}  // namespace

ActivationSet validate_activation_set(Matrix values, std::vector<std::size_t> labels,
                                      std::vector<std::string> class_names) {
  if (labels.size() != values.rows()) {
    throw Error(ErrorKind::ShapeMismatch, std::to_string(labels.size()) + " labels for " +
                                              std::to_string(values.rows()) + " rows");
  }
  if (values.rows() == 0 || values.cols() == 0) {
    throw Error(ErrorKind::ShapeMismatch, "activation matrix is empty");
  }
  if (class_names.empty()) {
    throw Error(ErrorKind::ShapeMismatch, "no class names");
  }

  std::unordered_set<std::string> seen;
  for (const auto& name : class_names) {
    if (!seen.insert(name).second) {
      throw Error(ErrorKind::DuplicateClassName, "class name '" + name + "' appears twice");
    }
  }

  std::vector<std::size_t> counts(class_names.size(), 0);
  for (std::size_t r = 0; r < labels.size(); ++r) {
    if (labels[r] >= class_names.size()) {
      throw Error(ErrorKind::LabelOutOfRange, "row " + std::to_string(r) + " has label " +
                                                  std::to_string(labels[r]) + " but only " +
                                                  std::to_string(class_names.size()) +
                                                  " classes exist");
    }
    ++counts[labels[r]];
  }
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) {
      throw Error(ErrorKind::EmptyClass, "class '" + class_names[c] + "' has no images");
    }
  }

  for (std::size_t r = 0; r < values.rows(); ++r) {
    for (std::size_t c = 0; c < values.cols(); ++c) {
      if (!std::isfinite(values(r, c))) {
        throw Error(ErrorKind::NonFiniteValue,
                    "row " + std::to_string(r) + ", column " + std::to_string(c));
      }
    }
  }

  ActivationSet a;
  a.values_ = std::move(values);
  a.labels_ = std::move(labels);
  a.class_names_ = std::move(class_names);
  return a;
}

std::vector<std::size_t> ActivationSet::class_sizes() const {
  std::vector<std::size_t> counts(class_names_.size(), 0);
  for (auto label : labels_) ++counts[label];
  return counts;
}

ActivationSet ActivationSet::select_rows(const std::vector<std::size_t>& rows) const {
  Matrix out(rows.size(), num_units());
  std::vector<std::size_t> labels;
  labels.reserve(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] >= num_images()) {
      throw Error(ErrorKind::InvalidArgument, "row index " + std::to_string(rows[k]) +
                                                  " out of range");
    }
    const auto src = values_.row(rows[k]);
    std::copy(src.begin(), src.end(), out.row(k).begin());
    labels.push_back(labels_[rows[k]]);
  }
  return validate_activation_set(std::move(out), std::move(labels), class_names_);
}

ActivationSet ActivationSet::with_values(Matrix values) const {
  if (values.rows() != values_.rows() || values.cols() != values_.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "replacement values change the matrix shape");
  }
  return validate_activation_set(std::move(values), labels_, class_names_);
}

std::vector<std::size_t> class_rows(const ActivationSet& a, std::size_t class_index) {
  if (class_index >= a.num_classes()) {
    throw Error(ErrorKind::ClassOutOfRange, "class index " + std::to_string(class_index) +
                                                " with " + std::to_string(a.num_classes()) +
                                                " classes");
  }
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < a.num_images(); ++r) {
    if (a.labels()[r] == class_index) rows.push_back(r);
  }
  return rows;
}

Matrix class_subset(const ActivationSet& a, std::size_t class_index) {
  const auto rows = class_rows(a, class_index);
  Matrix out(rows.size(), a.num_units());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto src = a.values().row(rows[k]);
    std::copy(src.begin(), src.end(), out.row(k).begin());
  }
  return out;
}

Split stratified_split(const ActivationSet& a, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "train fraction must lie in (0, 1)");
  }
  Rng rng = make_stream(seed, 0);
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
  for (std::size_t c = 0; c < a.num_classes(); ++c) {
    auto rows = class_rows(a, c);
    if (rows.size() < 2) {
      throw Error(ErrorKind::TooFewImages,
                  "class '" + a.class_names()[c] + "' needs at least 2 images to split");
    }
    std::shuffle(rows.begin(), rows.end(), rng);
    auto n_train = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(rows.size())));
    n_train = std::clamp<std::size_t>(n_train, 1, rows.size() - 1);
    train_rows.insert(train_rows.end(), rows.begin(), rows.begin() + n_train);
    test_rows.insert(test_rows.end(), rows.begin() + n_train, rows.end());
  }
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());
  return Split{a.select_rows(train_rows), a.select_rows(test_rows)};
}

RDM RDM::from_values(Matrix values, std::vector<std::string> class_names) {
  const std::size_t n = class_names.size();
  if (values.rows() != n || values.cols() != n) {
    throw Error(ErrorKind::InvalidRdm, "matrix is " + std::to_string(values.rows()) + "x" +
                                           std::to_string(values.cols()) + " for " +
                                           std::to_string(n) + " class names");
  }
  std::unordered_set<std::string> seen;
  for (const auto& name : class_names) {
    if (!seen.insert(name).second) {
      throw Error(ErrorKind::DuplicateClassName, "class name '" + name + "' appears twice");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(values(i, i)) > kRdmTolerance) {
      throw Error(ErrorKind::InvalidRdm, "diagonal entry " + std::to_string(i) + " is nonzero");
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double v = values(i, j);
      if (!std::isfinite(v) || v < -kRdmTolerance || v > 2.0 + kRdmTolerance) {
        throw Error(ErrorKind::InvalidRdm, "entry (" + std::to_string(i) + "," +
                                               std::to_string(j) + ") outside [0, 2]");
      }
      if (v != values(j, i)) {
        throw Error(ErrorKind::InvalidRdm, "matrix is not symmetric at (" + std::to_string(i) +
                                               "," + std::to_string(j) + ")");
      }
    }
  }
  return RDM(std::move(values), std::move(class_names));
}

}  // namespace rsa
