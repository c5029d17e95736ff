#include "pregp/posterior.hpp"

#include <cmath>
#include <numbers>

#include "pregp/error.hpp"

namespace pregp {

PosteriorGp::PosteriorGp(std::shared_ptr<const GpPrior> prior, ObservationSet data)
    : prior_(std::move(prior)), data_(std::move(data)) {
  if (!prior_) throw InputError("posterior needs a prior");
  if (data_.empty()) return;
  check_dimension(*prior_, data_.xs);
  Eigen::MatrixXd k = prior_->kernel_matrix(data_.xs, data_.xs);
  k.diagonal().array() += prior_->noise_variance();
  chol_.emplace(k);
  alpha_ = chol_->solve(Eigen::VectorXd(data_.ys - prior_->mean_vector(data_.xs)));
}

GaussianMarginal PosteriorGp::predict(const Points& x) const {
  check_dimension(*prior_, x);
  GaussianMarginal out{prior_->mean_vector(x), prior_->kernel_matrix(x, x)};
  if (!chol_) return out;
  const Eigen::MatrixXd k_xt = prior_->kernel_matrix(x, data_.xs);
  out.mean += k_xt * alpha_;
  const Eigen::MatrixXd v = chol_->solve_lower(k_xt.transpose());
  out.cov -= v.transpose() * v;
  return out;
}

PointPredictions PosteriorGp::predict_diagonal(const Points& x) const {
  check_dimension(*prior_, x);
  PointPredictions out{prior_->mean_vector(x), prior_->kernel_diagonal(x)};
  if (!chol_) return out;
  const Eigen::MatrixXd k_xt = prior_->kernel_matrix(x, data_.xs);
  out.mean += k_xt * alpha_;
  const Eigen::MatrixXd v = chol_->solve_lower(k_xt.transpose());
  out.variance -= v.colwise().squaredNorm().transpose();
  return out;
}

PosteriorGp condition(std::shared_ptr<const GpPrior> prior, ObservationSet data) {
  return PosteriorGp(std::move(prior), std::move(data));
}

PosteriorGp condition(const GpParams& params, ObservationSet data) {
  return PosteriorGp(std::make_shared<ParametricGp>(params), std::move(data));
}

double log_marginal_likelihood(const GpPrior& prior, const ObservationSet& data) {
  if (data.empty()) throw InputError("log marginal likelihood needs at least one observation");
  const GaussianMarginal m = prior_marginal(prior, data.xs);
  const JitteredCholesky chol(m.cov);
  const Eigen::VectorXd r = data.ys - m.mean;
  const Eigen::VectorXd z = chol.solve_lower(r);
  const double n = static_cast<double>(data.size());
  return -0.5 * z.squaredNorm() - 0.5 * chol.log_det() - 0.5 * n * std::log(2.0 * std::numbers::pi);
}

double log_marginal_likelihood(const GpParams& params, const ObservationSet& data) {
  return log_marginal_likelihood(ParametricGp(params), data);
}

}  // namespace pregp
