#include "pregp/moments.hpp"

#include "pregp/error.hpp"

namespace pregp {

MatchingMoments estimate_moments(Points inputs, Eigen::MatrixXd y, bool unbiased) {
  if (y.rows() < 1 || y.cols() < 1) throw InputError("moments need M >= 1 inputs and N >= 1 tasks");
  if (inputs.rows() != y.rows()) throw InputError("moments: one input row per observation row required");
  if (!y.allFinite() || !inputs.allFinite()) throw InputError("moments: non-finite entries");
  const auto n = static_cast<double>(y.cols());
  if (unbiased && y.cols() < 2) throw InputError("moments: unbiased rescale needs N >= 2");
  MatchingMoments m;
  m.mu_tilde = y.rowwise().sum() / n;
  const Eigen::MatrixXd centered = y.colwise() - m.mu_tilde;
  m.k_tilde = centered * centered.transpose() / n;
  if (unbiased) m.k_tilde *= n / (n - 1.0);
  m.k_tilde = 0.5 * (m.k_tilde + m.k_tilde.transpose());
  m.inputs = std::move(inputs);
  m.y = std::move(y);
  return m;
}

}  // namespace pregp
