#pragma once

#include <Eigen/Dense>

#include "pregp/dataset.hpp"
#include "pregp/gp_params.hpp"
#include "pregp/gp_prior.hpp"
#include "pregp/moments.hpp"

namespace pregp {

/// Eigenvalues of K~ below this fraction of the largest count as zero.
inline constexpr double kRankTolerance = 1e-10;

struct KlOptions {
  /// Drop the parameter-independent terms: returns 1/2 (tr(K^-1 K~) + d^T K^-1 d + ln|K|).
  bool minimization_form = false;
  double rank_tolerance = kRankTolerance;
};

/// Per-task terms may be evaluated on `threads` workers; they are always
/// summed in task order so the result does not depend on the thread count.
struct EvalOptions {
  std::size_t threads = 1;
};

/// Objective value together with its gradient in the flat parameter layout.
struct ValueAndGradient {
  double value = 0.0;
  Eigen::VectorXd gradient;
};

/// Numerical rank of K~ under `rank_tolerance`.
[[nodiscard]] Eigen::Index moments_rank(const MatchingMoments& moments, double rank_tolerance = kRankTolerance);

// ---- multi-task negative log likelihood -----------------------------------

/// -sum_i log p(D_i | mean, k, noise). Numerical errors name the failing task.
[[nodiscard]] double nll_objective(const GpParams& params, const MultiTaskDataset& dataset, const EvalOptions& opts = {});
[[nodiscard]] ValueAndGradient nll_value_and_gradient(const GpParams& params, const MultiTaskDataset& dataset,
                                                      const EvalOptions& opts = {});

// ---- empirical KL ---------------------------------------------------------

/// KL(N(mu~, K~) || model). Falls through to pseudo_kl when K~ is rank deficient.
[[nodiscard]] double kl_divergence(const GaussianMarginal& model, const MatchingMoments& moments,
                                   const KlOptions& opts = {});
/// Pseudo-KL against a possibly degenerate N(mu~, K~); may be negative.
/// Throws DegenerateMomentsError when K~ has numerical rank 0.
[[nodiscard]] double pseudo_kl_divergence(const GaussianMarginal& model, const MatchingMoments& moments,
                                          const KlOptions& opts = {});
/// Full KL after adding `epsilon` to the diagonals of both K and K~.
[[nodiscard]] double epsilon_kl_divergence(const GaussianMarginal& model, const MatchingMoments& moments,
                                           double epsilon);

[[nodiscard]] double kl_objective(const GpPrior& prior, const MatchingMoments& moments, const KlOptions& opts = {});
[[nodiscard]] double kl_objective(const GpParams& params, const MatchingMoments& moments, const KlOptions& opts = {});
[[nodiscard]] double pseudo_kl(const GpPrior& prior, const MatchingMoments& moments, const KlOptions& opts = {});
[[nodiscard]] double pseudo_kl(const GpParams& params, const MatchingMoments& moments, const KlOptions& opts = {});
/// The gradient does not depend on the form or on the pseudo/full dispatch.
[[nodiscard]] ValueAndGradient kl_value_and_gradient(const GpParams& params, const MatchingMoments& moments,
                                                     const KlOptions& opts = {});

// ---- NLL + lambda KL ------------------------------------------------------

[[nodiscard]] double combined_objective(const GpParams& params, const MultiTaskDataset& dataset,
                                        const MatchingMoments& moments, double lambda, const EvalOptions& opts = {});
[[nodiscard]] ValueAndGradient combined_value_and_gradient(const GpParams& params, const MultiTaskDataset& dataset,
                                                           const MatchingMoments& moments, double lambda,
                                                           const EvalOptions& opts = {});

}  // namespace pregp
