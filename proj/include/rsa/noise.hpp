#pragma once

#include <string>
#include <string_view>

#include "rsa/core.hpp"
#include "rsa/random.hpp"

namespace rsa {

enum class NoiseMode { PerUnitStd, GlobalStd };

std::string_view to_string(NoiseMode mode) noexcept;
/// Accepts "per_unit_std" and "global_std".
NoiseMode parse_noise_mode(std::string_view text);

/// Additive Gaussian measurement noise: value[r][u] += amplitude * s_u * z.
struct NoiseSpec {
  double amplitude = 1.0;
  NoiseMode mode = NoiseMode::PerUnitStd;

  bool operator==(const NoiseSpec&) const = default;
};

/// Returns a perturbed copy of `a`. s_u is the population standard deviation
/// of unit u over all images (PerUnitStd) or of every value (GlobalStd).
/// z is drawn from `rng` in row-major order. Amplitude 0 returns `a` unchanged
/// and consumes no randomness.
ActivationSet apply_noise(const ActivationSet& a, const NoiseSpec& spec, Rng& rng);

}  // namespace rsa
