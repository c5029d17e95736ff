#include "pregp/empirical_gp.hpp"

#include "pregp/error.hpp"

namespace pregp {

EmpiricalGp::EmpiricalGp(const MatchingMoments& moments, double noise_variance)
    : inputs_(moments.inputs), mean_(moments.mu_tilde), cov_(moments.k_tilde), noise_variance_(noise_variance) {
  if (inputs_.rows() < 1) throw InputError("empirical GP needs at least one stored input");
  if (!(noise_variance >= 0.0)) throw ParameterError("noise variance must be non-negative");
}

Eigen::Index EmpiricalGp::nearest(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  Eigen::Index best = 0;
  double best_d2 = (inputs_.row(0) - x).squaredNorm();
  for (Eigen::Index i = 1; i < inputs_.rows(); ++i) {
    const double d2 = (inputs_.row(i) - x).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return best;
}

Eigen::VectorXd EmpiricalGp::mean_vector(const Points& x) const {
  check_dimension(*this, x);
  Eigen::VectorXd m(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) m(i) = mean_(nearest(x.row(i)));
  return m;
}

Eigen::MatrixXd EmpiricalGp::kernel_matrix(const Points& x, const Points& x2) const {
  check_dimension(*this, x);
  check_dimension(*this, x2);
  std::vector<Eigen::Index> a(x.rows()), b(x2.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) a[i] = nearest(x.row(i));
  for (Eigen::Index j = 0; j < x2.rows(); ++j) b[j] = nearest(x2.row(j));
  Eigen::MatrixXd k(x.rows(), x2.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x2.rows(); ++j) k(i, j) = cov_(a[i], b[j]);
  return k;
}

EmpiricalGp empirical_gp(const MatchingMoments& moments, double noise_variance) {
  return EmpiricalGp(moments, noise_variance);
}

}  // namespace pregp
