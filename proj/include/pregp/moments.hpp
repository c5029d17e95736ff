#pragma once

#include <Eigen/Dense>

#include "pregp/linalg.hpp"

namespace pregp {

/// Sample moments of observations made at the same M inputs on N tasks.
struct MatchingMoments {
  Points inputs;             ///< M x d
  Eigen::MatrixXd y;         ///< M x N, one column per task
  Eigen::VectorXd mu_tilde;  ///< row means of y
  Eigen::MatrixXd k_tilde;   ///< (1/N) (y - mu 1^T)(y - mu 1^T)^T, or N/(N-1) times that when unbiased

  [[nodiscard]] Eigen::Index n_points() const noexcept { return y.rows(); }
  [[nodiscard]] Eigen::Index n_tasks() const noexcept { return y.cols(); }
};

/// Throws InputError on empty or non-finite input, or when `unbiased` is asked for with N = 1.
[[nodiscard]] MatchingMoments estimate_moments(Points inputs, Eigen::MatrixXd y, bool unbiased = false);

}  // namespace pregp
