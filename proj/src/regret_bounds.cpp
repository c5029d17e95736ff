#include "pregp/regret_bounds.hpp"

#include <cmath>

#include "pregp/error.hpp"

namespace pregp {

double information_gain(const GpPrior& prior, const Points& subset) {
  const double noise = prior.noise_variance();
  if (!(noise > 0.0)) throw DomainError("information gain needs a positive noise variance");
  Eigen::MatrixXd m = prior.kernel_matrix(subset, subset) / noise;
  m.diagonal().array() += 1.0;
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) throw NumericalError("information gain: I + k(A)/noise is not positive definite");
  return llt.matrixLLT().diagonal().array().log().sum();
}

double rho_T(const GpPrior& prior, const Points& candidates, int T) {
  if (T < 0) throw InputError("rho_T: T must be non-negative");
  if (T > candidates.rows()) throw InputError("rho_T: T exceeds the number of candidates");
  check_dimension(prior, candidates);
  const double noise = prior.noise_variance();
  if (!(noise > 0.0)) throw DomainError("rho_T needs a positive noise variance");
  const Eigen::Index n = candidates.rows();
  const Eigen::MatrixXd k = prior.kernel_matrix(candidates, candidates);
  // Posterior variances under noisy observations of the chosen set, updated
  // one rank-1 step at a time: log|I + K_A/noise| = sum log(1 + var_i/noise).
  Eigen::VectorXd var = k.diagonal();
  Eigen::MatrixXd basis(n, 0);
  std::vector<bool> chosen(static_cast<std::size_t>(n), false);
  double total = 0.0;
  for (int step = 0; step < T; ++step) {
    Eigen::Index best = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (chosen[static_cast<std::size_t>(i)]) continue;
      if (best < 0 || var(i) > var(best)) best = i;
    }
    chosen[static_cast<std::size_t>(best)] = true;
    const double vb = std::max(var(best), 0.0);
    total += 0.5 * std::log1p(vb / noise);
    Eigen::VectorXd col = k.col(best);
    if (basis.cols() > 0) col -= basis * basis.row(best).transpose();
    col /= std::sqrt(vb + noise);
    basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
    basis.col(basis.cols() - 1) = col;
    var -= col.cwiseAbs2();
  }
  return total;
}

double rho_T(const GpParams& params, const Points& candidates, int T) {
  return rho_T(ParametricGp(params), candidates, T);
}

double regret_iota(int n_tasks, int t, double delta) {
  const double n = n_tasks;
  const double l6 = std::log(6.0 / delta);
  const double denom = delta * n * (n - t - 1.0);
  if (!(denom > 0.0)) throw DomainError("iota: need N > t + 1");
  return std::sqrt(6.0 * (n - 3.0 + t + 2.0 * std::sqrt(t * l6) + 2.0 * l6) / denom);
}

double regret_b(int n_tasks, int t, double delta) {
  if (!(n_tasks > t)) throw DomainError("b: need N > t");
  return std::log(6.0 / delta) / (static_cast<double>(n_tasks) - t);
}

namespace {

void check_common(const RegretBoundInputs& in) {
  if (!(in.delta > 0.0 && in.delta < 1.0)) throw DomainError("regret bound: need 0 < delta < 1");
  if (in.T < 1) throw DomainError("regret bound: need T >= 1");
  if (!(in.c > 0.0)) throw DomainError("regret bound: need c > 0");
  if (!(in.sigma2 > 0.0)) throw DomainError("regret bound: need sigma2 > 0");
  if (!(in.rho_T >= 0.0)) throw DomainError("regret bound: need rho_T >= 0");
  if (!(in.n_tasks >= 4.0 * std::log(6.0 / in.delta) + in.T + 2.0))
    throw DomainError("regret bound: need N >= 4 log(6/delta) + T + 2");
}

double information_factor(const RegretBoundInputs& in) {
  return std::sqrt(2.0 * in.c * in.rho_T / (in.T * std::log(1.0 + in.c / in.sigma2)) + in.sigma2);
}

}  // namespace

double regret_bound_ucb(const RegretBoundInputs& in) {
  check_common(in);
  const double iota = regret_iota(in.n_tasks, in.T, in.delta);
  const double b = regret_b(in.n_tasks, in.T, in.delta);
  if (!(2.0 * std::sqrt(b) < 1.0)) throw DomainError("regret bound: need 2 sqrt(b_{T-1}) < 1");
  const double conf = std::sqrt(2.0 * std::log(3.0 / in.delta));
  const double eta = (iota + conf) / std::sqrt(1.0 - 2.0 * std::sqrt(b)) * std::sqrt(1.0 + 2.0 * std::sqrt(b) + 2.0 * b) +
                     iota + conf;
  return eta * information_factor(in) - conf * in.sigma2 / std::sqrt(in.c + in.sigma2);
}

double regret_bound_pi(const RegretBoundInputs& in) {
  check_common(in);
  const int tau = in.tau == 0 ? in.T : in.tau;
  if (tau < 1 || tau > in.T) throw DomainError("regret bound: need 1 <= tau <= T");
  if (!(in.f_star_hat >= in.observed_max)) throw DomainError("regret bound: need f_star_hat >= observed maximum");
  if (!(in.k_at_xstar >= 0.0)) throw DomainError("regret bound: need k_at_xstar >= 0");
  const double iota = regret_iota(in.n_tasks, tau, in.delta);
  const double b = regret_b(in.n_tasks, tau, in.delta);
  if (!(2.0 * std::sqrt(b) < 1.0)) throw DomainError("regret bound: need 2 sqrt(b_{tau-1}) < 1");
  const double conf = std::sqrt(2.0 * std::log(3.0 / (2.0 * in.delta)));
  const double standardized = (in.f_star_hat - in.mu_at_xstar) / std::sqrt(in.k_at_xstar + in.sigma2);
  const double eta =
      (standardized + iota) * std::sqrt((1.0 + 2.0 * std::sqrt(b) + 2.0 * b) / (1.0 - 2.0 * std::sqrt(b))) + iota + conf;
  return eta * information_factor(in) - conf * in.sigma2 / (2.0 * std::sqrt(in.c + in.sigma2));
}

}  // namespace pregp
