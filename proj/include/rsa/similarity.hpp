#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "rsa/core.hpp"
#include "rsa/noise.hpp"

namespace rsa {

/// Above-diagonal RDM entries in row-major order: (0,1), (0,2), ..., (1,2), ...
struct UpperTriangleVector {
  std::vector<double> values;
  std::size_t n = 0;
};

/// Recorded in reports so results carry the resampling policy they used.
inline constexpr std::string_view kResamplingPolicy =
    "per-class subsampling without replacement";

/// Throws TooFewClasses when n < 3.
UpperTriangleVector upper_triangle(const RDM& r);

/// 1-based ranks; tied values share the mean of the ranks they span.
std::vector<double> fractional_ranks(std::span<const double> x);

/// Pearson correlation of fractional ranks.
/// Throws LengthMismatch, TooFewElements (< 3), NonFiniteValue or ConstantInput.
double spearman(std::span<const double> x, std::span<const double> y);

/// Spearman correlation between the upper triangles of two RDMs over the same
/// classes in the same order (ClassMismatch otherwise).
double s_it(const RDM& model_rdm, const RDM& reference_rdm);

struct BootstrapOptions {
  NoiseSpec noise;
  std::size_t replicates = 100;
  std::size_t images_per_class = 0;  ///< 0 means the smallest class size
  std::uint64_t seed = 0;
};

/// s_IT on the full noise-free data, plus its distribution over replicates.
///
/// Replicate k draws images_per_class rows per class without replacement from
/// the stream (seed, k), applies the same rows to both sets, perturbs the
/// model activations only, and scores the two RDMs. The reported std is the
/// population standard deviation over replicates. A degenerate replicate is
/// an error.
SimilarityReport bootstrap_s_it(const ActivationSet& model, const ActivationSet& reference,
                                const BootstrapOptions& options);

/// Per-replicate s_IT values in replicate order (the raw draws behind
/// bootstrap_s_it).
std::vector<double> bootstrap_replicates(const ActivationSet& model,
                                         const ActivationSet& reference,
                                         const BootstrapOptions& options);

/// Draws images_per_class rows per class without replacement (partial
/// Fisher-Yates per class) and returns them sorted ascending, so a full-size
/// draw reproduces the original row order.
std::vector<std::size_t> draw_subsample(const ActivationSet& a, std::size_t images_per_class,
                                        Rng& rng);

}  // namespace rsa
