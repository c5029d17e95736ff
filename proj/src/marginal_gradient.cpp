#include "pregp/marginal_gradient.hpp"

#include "pregp/gp_prior.hpp"

namespace pregp {

Eigen::VectorXd marginal_gradient(const GpParams& params, const Points& x, const Eigen::MatrixXd& dl_dcov,
                                  const Eigen::VectorXd& dl_dmean) {
  const ParamLayout& lay = params.layout();
  const bool mlp = params.architecture().variant == Architecture::mlp_matern;
  const auto family = params.architecture().kernel;
  const auto kd = static_cast<Eigen::Index>(lay.kernel_dim);
  const Eigen::Index n = x.rows();

  Eigen::VectorXd grad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(lay.size));
  const Eigen::MatrixXd u = feature_map(params, x);
  const Eigen::ArrayXd inv_ls = params.lengthscales().array().inverse();
  const Eigen::ArrayXd inv_ls2 = inv_ls.square();
  const double amp2 = params.amplitude() * params.amplitude();

  grad(lay.log_noise) = params.noise_variance() * dl_dcov.trace();
  grad(lay.mean_offset) = dl_dmean.sum();

  Eigen::MatrixXd dl_du = Eigen::MatrixXd::Zero(n, kd);
  if (mlp) {
    const Eigen::VectorXd w = params.mean_weights();
    grad.segment(lay.mean_weights, kd) = u.transpose() * dl_dmean;
    dl_du += dl_dmean * w.transpose();
  }

  double d_log_amp = 0.0;
  Eigen::ArrayXd d_log_ls = Eigen::ArrayXd::Zero(kd);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double gij = dl_dcov(i, j);
      if (gij == 0.0) continue;
      const Eigen::ArrayXd delta = (u.row(i) - u.row(j)).transpose().array();
      const Eigen::ArrayXd scaled = delta * inv_ls;
      const double r = scaled.matrix().norm();
      const double kij = amp2 * kernel_profile(family, r);
      const double q = amp2 * kernel_profile_slope_over_r(family, r);
      d_log_amp += gij * 2.0 * kij;
      d_log_ls -= gij * q * scaled.square();
      if (mlp && i != j) {
        const Eigen::RowVectorXd dk_dui = (q * delta * inv_ls2).matrix().transpose();
        dl_du.row(i) += gij * dk_dui;
        dl_du.row(j) -= gij * dk_dui;
      }
    }
  }
  grad(lay.log_amplitude) = d_log_amp;
  grad.segment(lay.log_lengthscales, kd) = d_log_ls.matrix();

  if (mlp) {
    // u = tanh(W x + b)
    const Eigen::MatrixXd dpre = (dl_du.array() * (1.0 - u.array().square())).matrix();
    const Eigen::MatrixXd dw = dpre.transpose() * x;  // hidden x d
    const auto d = x.cols();
    for (Eigen::Index r = 0; r < kd; ++r)
      for (Eigen::Index c = 0; c < d; ++c) grad(lay.feature_weights + r * d + c) = dw(r, c);
    grad.segment(lay.feature_bias, kd) = dpre.colwise().sum().transpose();
  }
  return grad;
}

}  // namespace pregp
