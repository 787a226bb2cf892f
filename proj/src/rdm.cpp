#include "rsa/rdm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rsa/error.hpp"

namespace rsa {
namespace {

struct Centered {
  std::vector<double> values;
  double sum_squares = 0.0;
};

// A vector counts as constant when its centered energy is at rounding level
// relative to its raw energy.
bool is_constant(const Centered& c, std::span<const double> raw) {
  if (c.sum_squares == 0.0) return true;
  double raw_squares = 0.0;
  for (double v : raw) raw_squares += v * v;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  return c.sum_squares <= raw_squares * (16 * eps) * (16 * eps);
}

Centered center(std::span<const double> x) {
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  Centered c;
  c.values.reserve(x.size());
  for (double v : x) {
    const double d = v - mean;
    c.values.push_back(d);
    c.sum_squares += d * d;
  }
  return c;
}

double correlation(const Centered& a, const Centered& b) {
  double cross = 0.0;
  for (std::size_t u = 0; u < a.values.size(); ++u) cross += a.values[u] * b.values[u];
  const double r = cross / std::sqrt(a.sum_squares * b.sum_squares);
  return std::clamp(r, -1.0, 1.0);
}

}  // namespace

std::vector<double> class_mean(const ActivationSet& a, std::size_t class_index) {
  const auto rows = class_rows(a, class_index);
  std::vector<double> mean(a.num_units(), 0.0);
  double k = 0.0;
  for (auto r : rows) {
    k += 1.0;
    const auto x = a.values().row(r);
    for (std::size_t u = 0; u < mean.size(); ++u) mean[u] += (x[u] - mean[u]) / k;
  }
  return mean;
}

ClassMeans class_means(const ActivationSet& a) {
  ClassMeans out{Matrix(a.num_classes(), a.num_units()), a.class_names()};
  for (std::size_t c = 0; c < a.num_classes(); ++c) {
    const auto mean = class_mean(a, c);
    std::copy(mean.begin(), mean.end(), out.values.row(c).begin());
  }
  return out;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorKind::LengthMismatch,
                std::to_string(x.size()) + " vs " + std::to_string(y.size()) + " elements");
  }
  const auto cx = center(x);
  const auto cy = center(y);
  if (is_constant(cx, x) || is_constant(cy, y)) {
    throw Error(ErrorKind::DegenerateClassMean, "constant vector has no correlation");
  }
  return correlation(cx, cy);
}

RDM compute_rdm(const ClassMeans& means) {
  const std::size_t n = means.values.rows();
  if (n != means.class_names.size()) {
    throw Error(ErrorKind::ShapeMismatch, "class means and class names disagree in count");
  }
  if (means.values.cols() < 2) {
    throw Error(ErrorKind::TooFewUnits, "need at least 2 units, got " +
                                            std::to_string(means.values.cols()));
  }

  std::vector<Centered> centered;
  centered.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    centered.push_back(center(means.values.row(i)));
    if (is_constant(centered.back(), means.values.row(i))) {
      throw Error(ErrorKind::DegenerateClassMean,
                  "mean of class '" + means.class_names[i] + "' is constant across units");
    }
  }

  Matrix r(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = 1.0 - correlation(centered[i], centered[j]);
      r(i, j) = d;
      r(j, i) = d;
    }
  }
  return RDM::from_values(std::move(r), means.class_names);
}

ActivationSet normalize_per_unit(const ActivationSet& a) {
  Matrix out = a.values();
  const std::size_t rows = out.rows();
  for (std::size_t u = 0; u < out.cols(); ++u) {
    double mean = 0.0;
    for (std::size_t r = 0; r < rows; ++r) mean += out(r, u);
    mean /= static_cast<double>(rows);
    double ss = 0.0;
    for (std::size_t r = 0; r < rows; ++r) ss += (out(r, u) - mean) * (out(r, u) - mean);
    const double sd = std::sqrt(ss / static_cast<double>(rows));
    for (std::size_t r = 0; r < rows; ++r) {
      out(r, u) = sd > 0.0 ? (out(r, u) - mean) / sd : 0.0;
    }
  }
  return a.with_values(std::move(out));
}

}  // namespace rsa
