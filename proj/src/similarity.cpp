#include "rsa/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rsa/error.hpp"
#include "rsa/parallel.hpp"
#include "rsa/rdm.hpp"

namespace rsa {

UpperTriangleVector upper_triangle(const RDM& r) {
  const std::size_t n = r.size();
  if (n < 3) {
    throw Error(ErrorKind::TooFewClasses, "need at least 3 classes, got " + std::to_string(n));
  }
  UpperTriangleVector out;
  out.n = n;
  out.values.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) out.values.push_back(r(i, j));
  }
  return out;
}

std::vector<double> fractional_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && x[order[j]] == x[order[i]]) ++j;
    // positions i..j-1 hold ranks i+1..j
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorKind::LengthMismatch,
                std::to_string(x.size()) + " vs " + std::to_string(y.size()) + " elements");
  }
  if (x.size() < 3) {
    throw Error(ErrorKind::TooFewElements, "need at least 3 elements, got " +
                                               std::to_string(x.size()));
  }
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!std::isfinite(x[k]) || !std::isfinite(y[k])) {
      throw Error(ErrorKind::NonFiniteValue, "element " + std::to_string(k));
    }
  }

  const auto rx = fractional_ranks(x);
  const auto ry = fractional_ranks(y);
  const double n = static_cast<double>(rx.size());
  // Mean rank is (n + 1) / 2 regardless of ties.
  const double mean = 0.5 * (n + 1.0);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < rx.size(); ++k) {
    const double dx = rx[k] - mean;
    const double dy = ry[k] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorKind::ConstantInput, "rank correlation of a constant vector is undefined");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double s_it(const RDM& model_rdm, const RDM& reference_rdm) {
  if (model_rdm.class_names() != reference_rdm.class_names()) {
    throw Error(ErrorKind::ClassMismatch, "model and reference RDMs cover different classes");
  }
  const auto a = upper_triangle(model_rdm);
  const auto b = upper_triangle(reference_rdm);
  return spearman(a.values, b.values);
}

std::vector<std::size_t> draw_subsample(const ActivationSet& a, std::size_t images_per_class,
                                        Rng& rng) {
  std::vector<std::size_t> chosen;
  chosen.reserve(images_per_class * a.num_classes());
  for (std::size_t c = 0; c < a.num_classes(); ++c) {
    auto rows = class_rows(a, c);
    if (images_per_class > rows.size()) {
      throw Error(ErrorKind::TooFewImages, "class '" + a.class_names()[c] + "' has " +
                                               std::to_string(rows.size()) + " images, " +
                                               std::to_string(images_per_class) + " requested");
    }
    for (std::size_t k = 0; k < images_per_class; ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, rows.size() - 1);
      std::swap(rows[k], rows[pick(rng)]);
    }
    chosen.insert(chosen.end(), rows.begin(), rows.begin() + images_per_class);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

namespace {

void check_paired(const ActivationSet& model, const ActivationSet& reference) {
  if (model.class_names() != reference.class_names()) {
    throw Error(ErrorKind::ClassMismatch, "model and reference sets have different classes");
  }
  if (model.labels() != reference.labels()) {
    throw Error(ErrorKind::LabelMismatch,
                "model and reference sets must describe the same images in the same order");
  }
}

double score(const ActivationSet& model, const ActivationSet& reference) {
  return s_it(compute_rdm(class_means(model)), compute_rdm(class_means(reference)));
}

std::size_t resolve_images_per_class(const ActivationSet& a, std::size_t requested) {
  const auto sizes = a.class_sizes();
  const std::size_t smallest = *std::min_element(sizes.begin(), sizes.end());
  if (requested == 0) return smallest;
  if (requested > smallest) {
    throw Error(ErrorKind::TooFewImages, std::to_string(requested) +
                                             " images per class requested, smallest class has " +
                                             std::to_string(smallest));
  }
  return requested;
}

}  // namespace

std::vector<double> bootstrap_replicates(const ActivationSet& model,
                                         const ActivationSet& reference,
                                         const BootstrapOptions& options) {
  check_paired(model, reference);
  if (options.replicates == 0) {
    throw Error(ErrorKind::InvalidArgument, "replicates must be >= 1");
  }
  const std::size_t per_class = resolve_images_per_class(model, options.images_per_class);

  std::vector<double> values(options.replicates, 0.0);
  parallel_for(options.replicates, [&](std::size_t k) {
    Rng rng = make_stream(options.seed, k);
    const auto rows = draw_subsample(model, per_class, rng);
    const auto noisy = apply_noise(model.select_rows(rows), options.noise, rng);
    values[k] = score(noisy, reference.select_rows(rows));
  });
  return values;
}

SimilarityReport bootstrap_s_it(const ActivationSet& model, const ActivationSet& reference,
                                const BootstrapOptions& options) {
  check_paired(model, reference);
  SimilarityReport report;
  report.point_estimate = score(model, reference);
  report.replicates = options.replicates;
  report.seed = options.seed;

  const auto values = bootstrap_replicates(model, reference, options);
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  report.bootstrap_mean = std::clamp(mean, -1.0, 1.0);
  report.bootstrap_std = std::sqrt(ss / static_cast<double>(values.size()));
  return report;
}

}  // namespace rsa
