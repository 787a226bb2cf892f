#pragma once

#include "rsa/matrix.hpp"

namespace rsa {

/// C = (1/N_b) * sum_k (h_k - mu)(h_k - mu)^T over the rows of `batch`
/// (samples x hidden units). Throws BatchTooSmall when N_b < 2.
Matrix batch_covariance(const Matrix& batch);

/// Half the squared Frobenius norm of C minus half the squared norm of its
/// diagonal, i.e. half the sum of squared off-diagonal covariances.
double decov_loss(const Matrix& covariance);

/// Convenience for decov_loss(batch_covariance(batch)).
double decov_loss_of_batch(const Matrix& batch);

/// Exact gradient of decov_loss(batch_covariance(h)) with respect to h:
///   dL/dh_ai = (2/N_b) * sum_{j != i} c_ij (h_aj - mu_j)
/// The terms through mu vanish because centered columns sum to zero.
Matrix decov_gradient(const Matrix& batch);

/// Mean of c_ij^2 over i != j; the decorrelation figure tracked during training.
double mean_offdiag_squared_covariance(const Matrix& batch);

}  // namespace rsa
