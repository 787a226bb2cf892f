#include "rsa/decov.hpp"

#include <string>

#include "rsa/error.hpp"

namespace rsa {
namespace {

Matrix centered_columns(const Matrix& batch) {
  if (batch.rows() < 2) {
    throw Error(ErrorKind::BatchTooSmall,
                "batch of " + std::to_string(batch.rows()) + " samples; need at least 2");
  }
  const std::size_t n = batch.rows();
  const std::size_t d = batch.cols();
  std::vector<double> mu(d, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < d; ++i) mu[i] += batch(k, i);
  }
  for (auto& m : mu) m /= static_cast<double>(n);
  Matrix centered(n, d);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < d; ++i) centered(k, i) = batch(k, i) - mu[i];
  }
  return centered;
}

Matrix covariance_of_centered(const Matrix& centered) {
  const std::size_t n = centered.rows();
  const std::size_t d = centered.cols();
  Matrix c(d, d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += centered(k, i) * centered(k, j);
      s /= static_cast<double>(n);
      c(i, j) = s;
      c(j, i) = s;
    }
  }
  return c;
}

}  // namespace

Matrix batch_covariance(const Matrix& batch) {
  return covariance_of_centered(centered_columns(batch));
}

double decov_loss(const Matrix& covariance) {
  if (covariance.rows() != covariance.cols()) {
    throw Error(ErrorKind::NonSquare, std::to_string(covariance.rows()) + "x" +
                                          std::to_string(covariance.cols()) + " matrix");
  }
  double off = 0.0;
  for (std::size_t i = 0; i < covariance.rows(); ++i) {
    for (std::size_t j = 0; j < covariance.cols(); ++j) {
      if (i != j) off += covariance(i, j) * covariance(i, j);
    }
  }
  return 0.5 * off;
}

double decov_loss_of_batch(const Matrix& batch) { return decov_loss(batch_covariance(batch)); }

Matrix decov_gradient(const Matrix& batch) {
  const Matrix centered = centered_columns(batch);
  const Matrix c = covariance_of_centered(centered);
  const std::size_t n = batch.rows();
  const std::size_t d = batch.cols();
  const double scale = 2.0 / static_cast<double>(n);
  Matrix grad(n, d, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t i = 0; i < d; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        if (j != i) s += c(i, j) * centered(a, j);
      }
      grad(a, i) = scale * s;
    }
  }
  return grad;
}

double mean_offdiag_squared_covariance(const Matrix& batch) {
  const std::size_t d = batch.cols();
  if (d < 2) return 0.0;
  const Matrix c = batch_covariance(batch);
  return 2.0 * decov_loss(c) / static_cast<double>(d * (d - 1));
}

}  // namespace rsa
