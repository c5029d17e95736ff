#pragma once

#include <Eigen/Dense>

#include <memory>
#include <optional>

#include "pregp/gp_prior.hpp"
#include "pregp/linalg.hpp"

namespace pregp {

/// Predictive mean and variance at a batch of points.
struct PointPredictions {
  Eigen::VectorXd mean;
  Eigen::VectorXd variance;
};

/// A GP prior conditioned on observations. Immutable; safe to share across threads.
///
/// mean_D(x) = mean(x) + psi(x) (y - mean(X)),  k_D(x, x') = k(x, x') - psi(x) k(X, x'),
/// psi(x) = k(x, X) (k(X, X) + noise I)^-1.  Predictions are of the latent function.
class PosteriorGp {
 public:
  /// Throws NumericalError when k(X, X) + noise I cannot be factorized.
  PosteriorGp(std::shared_ptr<const GpPrior> prior, ObservationSet data);

  [[nodiscard]] const GpPrior& prior() const noexcept { return *prior_; }
  [[nodiscard]] const ObservationSet& data() const noexcept { return data_; }
  /// Jitter that was added on top of the noise variance (0 with no data).
  [[nodiscard]] double jitter() const noexcept { return chol_ ? chol_->jitter() : 0.0; }

  [[nodiscard]] GaussianMarginal predict(const Points& x) const;
  [[nodiscard]] PointPredictions predict_diagonal(const Points& x) const;

 private:
  std::shared_ptr<const GpPrior> prior_;
  ObservationSet data_;
  std::optional<JitteredCholesky> chol_;
  Eigen::VectorXd alpha_;  ///< (K + noise I)^-1 (y - mean(X))
};

[[nodiscard]] PosteriorGp condition(std::shared_ptr<const GpPrior> prior, ObservationSet data);
[[nodiscard]] PosteriorGp condition(const GpParams& params, ObservationSet data);

/// log N(y; mean(x), k(x, x) + noise I). Throws InputError on empty data.
[[nodiscard]] double log_marginal_likelihood(const GpPrior& prior, const ObservationSet& data);
[[nodiscard]] double log_marginal_likelihood(const GpParams& params, const ObservationSet& data);

}  // namespace pregp
