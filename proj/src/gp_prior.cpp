#include "pregp/gp_prior.hpp"

#include <cmath>

#include "pregp/error.hpp"

namespace pregp {

namespace {
const double kSqrt3 = std::sqrt(3.0);
}

ObservationSet::ObservationSet(Points x, Eigen::VectorXd y) : xs(std::move(x)), ys(std::move(y)) {
  if (xs.rows() != ys.size()) throw InputError("observation set: |xs| != |ys|");
  if (!ys.allFinite()) throw InputError("observation set: non-finite y");
}

Eigen::VectorXd GpPrior::kernel_diagonal(const Points& x) const {
  Eigen::VectorXd diag(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) diag(i) = kernel_matrix(x.row(i), x.row(i))(0, 0);
  return diag;
}

double kernel_profile(KernelFamily family, double r) {
  switch (family) {
    case KernelFamily::matern32: return (1.0 + kSqrt3 * r) * std::exp(-kSqrt3 * r);
  }
  return 0.0;
}

double kernel_profile_slope_over_r(KernelFamily family, double r) {
  switch (family) {
    case KernelFamily::matern32: return -3.0 * std::exp(-kSqrt3 * r);
  }
  return 0.0;
}

void check_dimension(const GpPrior& prior, const Points& x) {
  if (static_cast<std::size_t>(x.cols()) != prior.input_dim())
    throw InputError("points have dimension " + std::to_string(x.cols()) + ", model expects " +
                     std::to_string(prior.input_dim()));
}

Eigen::MatrixXd feature_map(const GpParams& params, const Points& x) {
  if (static_cast<std::size_t>(x.cols()) != params.input_dim())
    throw InputError("points have dimension " + std::to_string(x.cols()) + ", model expects " +
                     std::to_string(params.input_dim()));
  if (params.architecture().variant == Architecture::const_matern) return x;
  const Eigen::MatrixXd w = params.feature_weights();
  const Eigen::VectorXd b = params.feature_bias();
  Eigen::MatrixXd pre = x * w.transpose();
  pre.rowwise() += b.transpose();
  return pre.array().tanh().matrix();
}

Eigen::VectorXd ParametricGp::mean_vector(const Points& x) const {
  const Eigen::MatrixXd u = feature_map(params_, x);
  if (params_.architecture().variant == Architecture::const_matern)
    return Eigen::VectorXd::Constant(x.rows(), params_.mean_offset());
  return (u * params_.mean_weights()).array() + params_.mean_offset();
}

Eigen::MatrixXd ParametricGp::kernel_matrix(const Points& x, const Points& x2) const {
  const Eigen::MatrixXd u = feature_map(params_, x);
  const Eigen::MatrixXd u2 = feature_map(params_, x2);
  const Eigen::ArrayXd inv_ls = params_.lengthscales().array().inverse();
  const double amp2 = params_.amplitude() * params_.amplitude();
  const auto family = params_.architecture().kernel;
  Eigen::MatrixXd k(x.rows(), x2.rows());
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    for (Eigen::Index j = 0; j < u2.rows(); ++j) {
      const double r = ((u.row(i) - u2.row(j)).transpose().array() * inv_ls).matrix().norm();
      k(i, j) = amp2 * kernel_profile(family, r);
    }
  }
  return k;
}

Eigen::VectorXd ParametricGp::kernel_diagonal(const Points& x) const {
  check_dimension(*this, x);
  return Eigen::VectorXd::Constant(x.rows(), params_.amplitude() * params_.amplitude());
}

Eigen::MatrixXd kernel_matrix(const GpParams& params, const Points& x, const Points& x2) {
  return ParametricGp(params).kernel_matrix(x, x2);
}

Eigen::VectorXd mean_vector(const GpParams& params, const Points& x) { return ParametricGp(params).mean_vector(x); }

GaussianMarginal prior_marginal(const GpPrior& prior, const Points& x) {
  if (x.rows() == 0) throw InputError("prior marginal needs at least one point");
  check_dimension(prior, x);
  GaussianMarginal m{prior.mean_vector(x), prior.kernel_matrix(x, x)};
  m.cov.diagonal().array() += prior.noise_variance();
  return m;
}

GaussianMarginal prior_marginal(const GpParams& params, const Points& x) {
  return prior_marginal(ParametricGp(params), x);
}

}  // namespace pregp
