#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rsa/core.hpp"

namespace rsa {

/// Shape and noise of a synthetic dataset. The defaults mirror a 7-category,
/// 1,960-image, 128-site recording.
struct SynthSpec {
  std::size_t n_classes = 7;
  std::size_t units = 128;
  std::size_t images_per_class = 280;
  double within_class_std = 1.0;
  std::uint64_t seed = 0;
  /// When unset, means come from default_class_means(n_classes, units, seed).
  std::optional<Matrix> class_means;
};

struct SynthData {
  ActivationSet data;
  RDM truth;          ///< compute_rdm of the specified (not sampled) means
  Matrix class_means;
};

/// Structured class means: three shared latent factors plus an independent
/// part at half scale, m_c = sum_f L_cf B_f + 0.5 E_c with L, B, E standard
/// normal. Drawn from the stream (seed, 0).
Matrix default_class_means(std::size_t n_classes, std::size_t units, std::uint64_t seed);

/// Images are grouped by class (class 0 first); image k of class c is
/// class_means[c] + within_class_std * z with z drawn from the stream
/// derive_seed(seed, 1 + c). Class names are "c0", "c1", ...
/// Throws DegenerateClassMean for a constant mean row.
SynthData generate(const SynthSpec& spec);

/// One dataset per distortion level delta, with means
///   (1 - delta) * base + delta * random
/// where base is the spec's means and random is an unrelated draw of the same
/// generator (stream (seed, 1000)). Every member shares the spec's noise seed.
/// Levels must be ascending, start at 0 and stay within [0, 1].
std::vector<ActivationSet> make_graded_family(const SynthSpec& spec,
                                              std::span<const double> distortion_levels);

/// The mixed means used for a given level; exposed for oracle tests.
Matrix graded_means(const SynthSpec& spec, double level);

}  // namespace rsa
