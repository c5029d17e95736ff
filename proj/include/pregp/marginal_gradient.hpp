#pragma once

#include <Eigen/Dense>

#include "pregp/gp_params.hpp"
#include "pregp/linalg.hpp"

namespace pregp {

/// Chain rule from the marginal N(mu, K), K = k(x, x) + noise I, to the flat
/// parameter vector. `dl_dcov` is the symmetric matrix of dL/dK_ij and
/// `dl_dmean` the vector dL/dmu_i.
[[nodiscard]] Eigen::VectorXd marginal_gradient(const GpParams& params, const Points& x,
                                                const Eigen::MatrixXd& dl_dcov, const Eigen::VectorXd& dl_dmean);

}  // namespace pregp
