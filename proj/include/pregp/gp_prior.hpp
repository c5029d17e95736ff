#pragma once

#include <Eigen/Dense>

#include <memory>

#include "pregp/gp_params.hpp"
#include "pregp/linalg.hpp"

namespace pregp {

/// Observed (x, y) pairs of one function, inputs in warped coordinates.
struct ObservationSet {
  Points xs;  ///< n x d
  Eigen::VectorXd ys;

  ObservationSet() = default;
  /// Throws InputError when |xs| != |ys| or ys are not finite.
  ObservationSet(Points x, Eigen::VectorXd y);

  [[nodiscard]] Eigen::Index size() const noexcept { return ys.size(); }
  [[nodiscard]] bool empty() const noexcept { return ys.size() == 0; }
};

/// Mean vector and covariance of a finite-dimensional Gaussian.
struct GaussianMarginal {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// A GP prior: mean function, kernel and observation-noise variance.
class GpPrior {
 public:
  virtual ~GpPrior() = default;
  [[nodiscard]] virtual std::size_t input_dim() const = 0;
  [[nodiscard]] virtual Eigen::VectorXd mean_vector(const Points& x) const = 0;
  [[nodiscard]] virtual Eigen::MatrixXd kernel_matrix(const Points& x, const Points& x2) const = 0;
  /// k(x, x) for every row.
  [[nodiscard]] virtual Eigen::VectorXd kernel_diagonal(const Points& x) const;
  [[nodiscard]] virtual double noise_variance() const = 0;
};

/// Kernel profile phi(r) of the scaled distance r.
[[nodiscard]] double kernel_profile(KernelFamily family, double r);
/// phi'(r) / r, finite at r = 0.
[[nodiscard]] double kernel_profile_slope_over_r(KernelFamily family, double r);

/// Kernel inputs: the raw points for const_matern, tanh(W x + b) for mlp_matern.
[[nodiscard]] Eigen::MatrixXd feature_map(const GpParams& params, const Points& x);

/// The parametric GP described by a GpParams value.
class ParametricGp final : public GpPrior {
 public:
  explicit ParametricGp(GpParams params) : params_(std::move(params)) {}

  [[nodiscard]] const GpParams& params() const noexcept { return params_; }
  [[nodiscard]] std::size_t input_dim() const override { return params_.input_dim(); }
  [[nodiscard]] Eigen::VectorXd mean_vector(const Points& x) const override;
  [[nodiscard]] Eigen::MatrixXd kernel_matrix(const Points& x, const Points& x2) const override;
  [[nodiscard]] Eigen::VectorXd kernel_diagonal(const Points& x) const override;
  [[nodiscard]] double noise_variance() const override { return params_.noise_variance(); }

 private:
  GpParams params_;
};

/// Throws InputError when a point set does not have the prior's dimension.
void check_dimension(const GpPrior& prior, const Points& x);

[[nodiscard]] Eigen::MatrixXd kernel_matrix(const GpParams& params, const Points& x, const Points& x2);
[[nodiscard]] Eigen::VectorXd mean_vector(const GpParams& params, const Points& x);

/// N(mean(x), k(x, x) + noise * I). Throws InputError on an empty point set.
[[nodiscard]] GaussianMarginal prior_marginal(const GpPrior& prior, const Points& x);
[[nodiscard]] GaussianMarginal prior_marginal(const GpParams& params, const Points& x);

}  // namespace pregp
