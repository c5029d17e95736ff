#pragma once

#include "pregp/gp_prior.hpp"
#include "pregp/moments.hpp"

namespace pregp {

/// Memory-based GP that reproduces a set of sample moments exactly on the
/// matching inputs. Queries resolve to the nearest stored input (Euclidean in
/// warped coordinates, lowest index on ties).
class EmpiricalGp final : public GpPrior {
 public:
  explicit EmpiricalGp(const MatchingMoments& moments, double noise_variance = 0.0);

  [[nodiscard]] std::size_t input_dim() const override { return static_cast<std::size_t>(inputs_.cols()); }
  [[nodiscard]] Eigen::VectorXd mean_vector(const Points& x) const override;
  [[nodiscard]] Eigen::MatrixXd kernel_matrix(const Points& x, const Points& x2) const override;
  [[nodiscard]] double noise_variance() const override { return noise_variance_; }

  [[nodiscard]] Eigen::Index nearest(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;

 private:
  Points inputs_;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
  double noise_variance_;
};

[[nodiscard]] EmpiricalGp empirical_gp(const MatchingMoments& moments, double noise_variance = 0.0);

}  // namespace pregp
