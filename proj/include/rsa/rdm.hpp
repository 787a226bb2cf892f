#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rsa/core.hpp"

namespace rsa {

/// Mean activation vector per class (n x num_units).
struct ClassMeans {
  Matrix values;
  std::vector<std::string> class_names;
};

/// Elementwise mean of the rows of class `class_index`.
///
/// Uses the incremental update m += (x - m) / k, which reproduces a vector
/// exactly when every row is identical and otherwise agrees with a plain
/// sequential sum to rounding.
std::vector<double> class_mean(const ActivationSet& a, std::size_t class_index);

ClassMeans class_means(const ActivationSet& a);

/// Population Pearson correlation of two equal-length vectors (two-pass).
/// Throws DegenerateClassMean if either vector is constant.
double pearson(std::span<const double> x, std::span<const double> y);

/// r_ij = 1 - pearson(mean_i, mean_j) over the unit dimension.
///
/// Each pair i < j is computed independently and mirrored; the diagonal is
/// exactly zero. Needs at least two units and no constant class mean.
RDM compute_rdm(const ClassMeans& means);

/// z-scores every unit across all images (population std). Constant units map
/// to zero.
ActivationSet normalize_per_unit(const ActivationSet& a);

}  // namespace rsa
