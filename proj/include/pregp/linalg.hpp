#pragma once

#include <Eigen/Dense>

#include <array>

namespace pregp {

/// A set of points, one per row.
using Points = Eigen::MatrixXd;
using Point = Eigen::VectorXd;

/// Diagonal jitter levels tried in order when a covariance fails to factorize.
inline constexpr std::array<double, 4> kJitterLevels{0.0, 1e-10, 1e-6, 1e-4};

/// Cholesky factor of `K + jitter * I` for the smallest jitter level that works.
class JitteredCholesky {
 public:
  /// Throws NumericalError listing every attempted jitter when all levels fail.
  explicit JitteredCholesky(const Eigen::MatrixXd& cov);

  [[nodiscard]] double jitter() const noexcept { return jitter_; }
  [[nodiscard]] Eigen::Index size() const noexcept { return llt_.rows(); }
  [[nodiscard]] double log_det() const noexcept { return log_det_; }
  [[nodiscard]] Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const { return llt_.solve(rhs); }
  [[nodiscard]] Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const { return llt_.solve(rhs); }
  /// L^{-1} rhs.
  [[nodiscard]] Eigen::MatrixXd solve_lower(const Eigen::MatrixXd& rhs) const;
  [[nodiscard]] Eigen::MatrixXd inverse() const;
  [[nodiscard]] Eigen::MatrixXd lower() const { return llt_.matrixL(); }

 private:
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double jitter_ = 0.0;
  double log_det_ = 0.0;
};

/// Smallest eigenvalue of a symmetric matrix.
[[nodiscard]] double min_eigenvalue(const Eigen::MatrixXd& sym);

[[nodiscard]] bool all_finite(const Eigen::MatrixXd& m);

}  // namespace pregp
