#pragma once

#include <limits>

#include "pregp/gp_prior.hpp"
#include "pregp/linalg.hpp"

namespace pregp {

/// Greedy estimate of max_{|A| = T} 1/2 log|I + k(A) / noise| over the
/// candidate rows: repeatedly adds the candidate with the largest log-det
/// gain (lowest index on ties). Exact when T equals the candidate count.
/// Throws InputError when T > |candidates|.
[[nodiscard]] double rho_T(const GpPrior& prior, const Points& candidates, int T);
[[nodiscard]] double rho_T(const GpParams& params, const Points& candidates, int T);

/// 1/2 log|I + k(A) / noise| for one subset.
[[nodiscard]] double information_gain(const GpPrior& prior, const Points& subset);

struct RegretBoundInputs {
  int n_tasks = 0;       ///< N
  int T = 0;
  double delta = 0.1;
  double c = 1.0;        ///< upper bound on k(x, x)
  double sigma2 = 0.01;  ///< observation noise variance
  double rho_T = 0.0;
  // PI only
  double f_star_hat = 0.0;   ///< target value, at least max f
  double mu_at_xstar = 0.0;  ///< posterior mean at the maximizer after tau - 1 steps
  double k_at_xstar = 0.0;   ///< posterior variance there
  int tau = 0;               ///< iteration of smallest posterior variance; 0 means T
  double observed_max = -std::numeric_limits<double>::infinity();
};

/// iota_{t-1} and b_{t-1} of the bound, for t in [1, T].
[[nodiscard]] double regret_iota(int n_tasks, int t, double delta);
[[nodiscard]] double regret_b(int n_tasks, int t, double delta);

/// Simple-regret bound of meta BO with GP-UCB. Throws DomainError when
/// N < 4 log(6/delta) + T + 2 or another precondition fails.
[[nodiscard]] double regret_bound_ucb(const RegretBoundInputs& in);
/// Simple-regret bound of meta BO with PI targeting f_star_hat.
[[nodiscard]] double regret_bound_pi(const RegretBoundInputs& in);

}  // namespace pregp
