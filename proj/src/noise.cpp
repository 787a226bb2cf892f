#include "rsa/noise.hpp"

#include <cmath>
#include <vector>

#include "rsa/error.hpp"

namespace rsa {
namespace {

std::vector<double> unit_std(const Matrix& m) {
  std::vector<double> sd(m.cols(), 0.0);
  const auto n = static_cast<double>(m.rows());
  for (std::size_t u = 0; u < m.cols(); ++u) {
    double mean = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r) mean += m(r, u);
    mean /= n;
    double ss = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r) ss += (m(r, u) - mean) * (m(r, u) - mean);
    sd[u] = std::sqrt(ss / n);
  }
  return sd;
}

double global_std(const Matrix& m) {
  const auto values = m.data();
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size()));
}

}  // namespace

std::string_view to_string(NoiseMode mode) noexcept {
  return mode == NoiseMode::PerUnitStd ? "per_unit_std" : "global_std";
}

NoiseMode parse_noise_mode(std::string_view text) {
  if (text == "per_unit_std") return NoiseMode::PerUnitStd;
  if (text == "global_std") return NoiseMode::GlobalStd;
  throw Error(ErrorKind::InvalidArgument, "unknown noise mode '" + std::string(text) + "'");
}

ActivationSet apply_noise(const ActivationSet& a, const NoiseSpec& spec, Rng& rng) {
  if (!(spec.amplitude >= 0.0) || !std::isfinite(spec.amplitude)) {
    throw Error(ErrorKind::InvalidArgument, "noise amplitude must be finite and >= 0");
  }
  if (spec.amplitude == 0.0) return a;

  std::vector<double> scale;
  if (spec.mode == NoiseMode::PerUnitStd) {
    scale = unit_std(a.values());
  } else {
    scale.assign(a.num_units(), global_std(a.values()));
  }
  for (auto& s : scale) s *= spec.amplitude;

  Matrix out = a.values();
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t r = 0; r < out.rows(); ++r) {
    for (std::size_t u = 0; u < out.cols(); ++u) {
      const double z = normal(rng);
      if (scale[u] != 0.0) out(r, u) += scale[u] * z;
    }
  }
  return a.with_values(std::move(out));
}

}  // namespace rsa
