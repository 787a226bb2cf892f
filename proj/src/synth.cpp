#include "rsa/synth.hpp"

#include <cmath>
#include <string>

#include "rsa/error.hpp"
#include "rsa/random.hpp"
#include "rsa/rdm.hpp"

namespace rsa {
namespace {

constexpr std::size_t kLatentFactors = 3;
constexpr std::uint64_t kRandomStructureStream = 1000;

void validate_spec(const SynthSpec& spec) {
  if (spec.n_classes < 3) throw Error(ErrorKind::InvalidArgument, "n_classes must be >= 3");
  if (spec.units < 2) throw Error(ErrorKind::InvalidArgument, "units must be >= 2");
  if (spec.images_per_class < 1) {
    throw Error(ErrorKind::InvalidArgument, "images_per_class must be >= 1");
  }
  if (!(spec.within_class_std >= 0.0) || !std::isfinite(spec.within_class_std)) {
    throw Error(ErrorKind::InvalidArgument, "within_class_std must be finite and >= 0");
  }
  if (spec.class_means && (spec.class_means->rows() != spec.n_classes ||
                           spec.class_means->cols() != spec.units)) {
    throw Error(ErrorKind::ShapeMismatch, "class_means shape does not match the spec");
  }
}

std::vector<std::string> class_names(std::size_t n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t c = 0; c < n; ++c) names.push_back("c" + std::to_string(c));
  return names;
}

Matrix base_means(const SynthSpec& spec) {
  return spec.class_means ? *spec.class_means
                          : default_class_means(spec.n_classes, spec.units, spec.seed);
}

Matrix random_means(const SynthSpec& spec) {
  return default_class_means(spec.n_classes, spec.units,
                             derive_seed(spec.seed, kRandomStructureStream));
}

}  // namespace

Matrix default_class_means(std::size_t n_classes, std::size_t units, std::uint64_t seed) {
  Rng rng = make_stream(seed, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix loadings(n_classes, kLatentFactors);
  for (double& v : loadings.data()) v = normal(rng);
  Matrix basis(kLatentFactors, units);
  for (double& v : basis.data()) v = normal(rng);
  Matrix means(n_classes, units);
  for (std::size_t c = 0; c < n_classes; ++c) {
    for (std::size_t u = 0; u < units; ++u) {
      double v = 0.0;
      for (std::size_t f = 0; f < kLatentFactors; ++f) v += loadings(c, f) * basis(f, u);
      means(c, u) = v + 0.5 * normal(rng);
    }
  }
  return means;
}

SynthData generate(const SynthSpec& spec) {
  validate_spec(spec);
  Matrix means = base_means(spec);
  const auto names = class_names(spec.n_classes);
  RDM truth = compute_rdm(ClassMeans{means, names});

  const std::size_t rows = spec.n_classes * spec.images_per_class;
  Matrix values(rows, spec.units);
  std::vector<std::size_t> labels(rows);
  for (std::size_t c = 0; c < spec.n_classes; ++c) {
    Rng rng(derive_seed(spec.seed, 1 + c));
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t k = 0; k < spec.images_per_class; ++k) {
      const std::size_t r = c * spec.images_per_class + k;
      labels[r] = c;
      for (std::size_t u = 0; u < spec.units; ++u) {
        const double z = normal(rng);
        values(r, u) = spec.within_class_std == 0.0 ? means(c, u)
                                                    : means(c, u) + spec.within_class_std * z;
      }
    }
  }
  return SynthData{validate_activation_set(std::move(values), std::move(labels), names),
                   std::move(truth), std::move(means)};
}

Matrix graded_means(const SynthSpec& spec, double level) {
  validate_spec(spec);
  const Matrix base = base_means(spec);
  const Matrix other = random_means(spec);
  Matrix mixed(base.rows(), base.cols());
  for (std::size_t k = 0; k < mixed.size(); ++k) {
    mixed.data()[k] = level == 0.0 ? base.data()[k]
                                   : (1.0 - level) * base.data()[k] + level * other.data()[k];
  }
  return mixed;
}

std::vector<ActivationSet> make_graded_family(const SynthSpec& spec,
                                              std::span<const double> distortion_levels) {
  if (distortion_levels.empty() || distortion_levels.front() != 0.0) {
    throw Error(ErrorKind::InvalidLevels, "distortion levels must start at 0");
  }
  for (std::size_t k = 0; k < distortion_levels.size(); ++k) {
    const double level = distortion_levels[k];
    if (!(level >= 0.0 && level <= 1.0)) {
      throw Error(ErrorKind::InvalidLevels, "distortion levels must lie in [0, 1]");
    }
    if (k > 0 && level < distortion_levels[k - 1]) {
      throw Error(ErrorKind::InvalidLevels, "distortion levels must be ascending");
    }
  }
  std::vector<ActivationSet> family;
  family.reserve(distortion_levels.size());
  for (double level : distortion_levels) {
    SynthSpec member = spec;
    member.class_means = graded_means(spec, level);
    family.push_back(generate(member).data);
  }
  return family;
}

}  // namespace rsa
