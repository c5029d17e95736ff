#include "pregp/objectives.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "parallel.hpp"
#include "pregp/error.hpp"
#include "pregp/linalg.hpp"
#include "pregp/marginal_gradient.hpp"
#include "pregp/posterior.hpp"

namespace pregp {

namespace {

const double kLog2Pi = std::log(2.0 * std::numbers::pi);

struct Spectrum {
  Eigen::Index rank = 0;
  double log_pdet = 0.0;  ///< sum of log of the retained eigenvalues
  double threshold = 0.0;
};

Spectrum spectrum(const Eigen::MatrixXd& k_tilde, double rank_tolerance) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k_tilde, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = es.eigenvalues();
  Spectrum s;
  const double top = ev.size() ? ev.maxCoeff() : 0.0;
  if (!(top > 0.0)) return s;
  s.threshold = rank_tolerance * top;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > s.threshold) {
      ++s.rank;
      s.log_pdet += std::log(ev(i));
    }
  }
  return s;
}

// The three parameter-dependent pieces shared by every KL variant.
struct KlTerms {
  double trace = 0.0;   // tr(K^-1 K~)
  double quad = 0.0;    // (mu - mu~)^T K^-1 (mu - mu~)
  double log_det = 0.0; // ln|K|
};

KlTerms kl_terms(const GaussianMarginal& model, const MatchingMoments& m, const JitteredCholesky& chol) {
  KlTerms t;
  const Eigen::VectorXd diff = model.mean - m.mu_tilde;
  t.trace = chol.solve(m.k_tilde).trace();
  t.quad = diff.dot(chol.solve(diff));
  t.log_det = chol.log_det();
  return t;
}

void check_shapes(const GaussianMarginal& model, const MatchingMoments& m) {
  const Eigen::Index n = m.n_points();
  if (model.mean.size() != n || model.cov.rows() != n || model.cov.cols() != n || m.k_tilde.rows() != n ||
      m.k_tilde.cols() != n || m.mu_tilde.size() != n)
    throw InputError("KL: model marginal and moments have different sizes");
}

double pseudo_from_terms(const KlTerms& t, const Spectrum& s, Eigen::Index m) {
  const auto r = static_cast<double>(s.rank);
  return 0.5 * (t.trace + t.quad + t.log_det - s.log_pdet - r + (static_cast<double>(m) - r) * kLog2Pi);
}

double kl_from_terms(const KlTerms& t, const Spectrum& s, Eigen::Index m, const KlOptions& opts) {
  if (opts.minimization_form) return 0.5 * (t.trace + t.quad + t.log_det);
  if (s.rank == 0) {
    std::ostringstream msg;
    msg << "matching moments are degenerate: no eigenvalue of K~ above " << opts.rank_tolerance
        << " x max eigenvalue";
    throw DegenerateMomentsError(msg.str());
  }
  // With full rank this is the ordinary KL divergence.
  return pseudo_from_terms(t, s, m);
}

double task_nll(const GpParams& params, const TaskData& task) {
  if (task.observations.empty()) throw InputError("task '" + task.name + "' has no observations");
  try {
    return -log_marginal_likelihood(params, task.observations);
  } catch (const NumericalError& e) {
    throw NumericalError("task '" + task.name + "': " + e.what(), e.attempted_jitter());
  }
}

ValueAndGradient task_nll_with_gradient(const GpParams& params, const TaskData& task) {
  if (task.observations.empty()) throw InputError("task '" + task.name + "' has no observations");
  const auto& obs = task.observations;
  try {
    const GaussianMarginal m = prior_marginal(params, obs.xs);
    const JitteredCholesky chol(m.cov);
    const Eigen::VectorXd alpha = chol.solve(Eigen::VectorXd(obs.ys - m.mean));
    const auto n = static_cast<double>(obs.size());
    ValueAndGradient out;
    out.value = 0.5 * (obs.ys - m.mean).dot(alpha) + 0.5 * chol.log_det() + 0.5 * n * kLog2Pi;
    const Eigen::MatrixXd dl_dcov = 0.5 * (chol.inverse() - alpha * alpha.transpose());
    out.gradient = marginal_gradient(params, obs.xs, dl_dcov, -alpha);
    return out;
  } catch (const NumericalError& e) {
    throw NumericalError("task '" + task.name + "': " + e.what(), e.attempted_jitter());
  }
}

}  // namespace

Eigen::Index moments_rank(const MatchingMoments& moments, double rank_tolerance) {
  return spectrum(moments.k_tilde, rank_tolerance).rank;
}

double nll_objective(const GpParams& params, const MultiTaskDataset& dataset, const EvalOptions& opts) {
  std::vector<double> terms(dataset.tasks.size());
  detail::parallel_for(terms.size(), opts.threads,
                       [&](std::size_t i) { terms[i] = task_nll(params, dataset.tasks[i]); });
  double total = 0.0;
  for (double t : terms) total += t;
  return total;
}

ValueAndGradient nll_value_and_gradient(const GpParams& params, const MultiTaskDataset& dataset,
                                        const EvalOptions& opts) {
  std::vector<ValueAndGradient> terms(dataset.tasks.size());
  detail::parallel_for(terms.size(), opts.threads,
                       [&](std::size_t i) { terms[i] = task_nll_with_gradient(params, dataset.tasks[i]); });
  ValueAndGradient out{0.0, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(params.layout().size))};
  for (const auto& t : terms) {
    out.value += t.value;
    out.gradient += t.gradient;
  }
  return out;
}

double kl_divergence(const GaussianMarginal& model, const MatchingMoments& moments, const KlOptions& opts) {
  check_shapes(model, moments);
  const JitteredCholesky chol(model.cov);
  const KlTerms t = kl_terms(model, moments, chol);
  if (opts.minimization_form) return 0.5 * (t.trace + t.quad + t.log_det);
  return kl_from_terms(t, spectrum(moments.k_tilde, opts.rank_tolerance), moments.n_points(), opts);
}

double pseudo_kl_divergence(const GaussianMarginal& model, const MatchingMoments& moments, const KlOptions& opts) {
  check_shapes(model, moments);
  const Spectrum s = spectrum(moments.k_tilde, opts.rank_tolerance);
  if (s.rank == 0) {
    std::ostringstream msg;
    msg << "pseudo-KL undefined: K~ has rank 0 under threshold " << opts.rank_tolerance << " x max eigenvalue";
    throw DegenerateMomentsError(msg.str());
  }
  const JitteredCholesky chol(model.cov);
  const KlTerms t = kl_terms(model, moments, chol);
  if (opts.minimization_form) return 0.5 * (t.trace + t.quad + t.log_det);
  return pseudo_from_terms(t, s, moments.n_points());
}

double epsilon_kl_divergence(const GaussianMarginal& model, const MatchingMoments& moments, double epsilon) {
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  GaussianMarginal shifted = model;
  shifted.cov.diagonal().array() += epsilon;
  MatchingMoments m = moments;
  m.k_tilde.diagonal().array() += epsilon;
  return kl_divergence(shifted, m, KlOptions{false, 0.0});
}

double kl_objective(const GpPrior& prior, const MatchingMoments& moments, const KlOptions& opts) {
  return kl_divergence(prior_marginal(prior, moments.inputs), moments, opts);
}

double kl_objective(const GpParams& params, const MatchingMoments& moments, const KlOptions& opts) {
  return kl_objective(ParametricGp(params), moments, opts);
}

double pseudo_kl(const GpPrior& prior, const MatchingMoments& moments, const KlOptions& opts) {
  return pseudo_kl_divergence(prior_marginal(prior, moments.inputs), moments, opts);
}

double pseudo_kl(const GpParams& params, const MatchingMoments& moments, const KlOptions& opts) {
  return pseudo_kl(ParametricGp(params), moments, opts);
}

ValueAndGradient kl_value_and_gradient(const GpParams& params, const MatchingMoments& moments, const KlOptions& opts) {
  const GaussianMarginal model = prior_marginal(params, moments.inputs);
  check_shapes(model, moments);
  const JitteredCholesky chol(model.cov);
  const KlTerms t = kl_terms(model, moments, chol);
  ValueAndGradient out;
  out.value = opts.minimization_form
                  ? 0.5 * (t.trace + t.quad + t.log_det)
                  : kl_from_terms(t, spectrum(moments.k_tilde, opts.rank_tolerance), moments.n_points(), opts);
  const Eigen::MatrixXd k_inv = chol.inverse();
  const Eigen::VectorXd beta = chol.solve(Eigen::VectorXd(model.mean - moments.mu_tilde));
  Eigen::MatrixXd dl_dcov = 0.5 * (k_inv - k_inv * moments.k_tilde * k_inv - beta * beta.transpose());
  dl_dcov = 0.5 * (dl_dcov + dl_dcov.transpose());
  out.gradient = marginal_gradient(params, moments.inputs, dl_dcov, beta);
  return out;
}

double combined_objective(const GpParams& params, const MultiTaskDataset& dataset, const MatchingMoments& moments,
                          double lambda, const EvalOptions& opts) {
  if (!(lambda >= 0.0)) throw InputError("lambda must be non-negative");
  const double nll = nll_objective(params, dataset, opts);
  if (lambda == 0.0) return nll;
  return nll + lambda * kl_objective(params, moments);
}

ValueAndGradient combined_value_and_gradient(const GpParams& params, const MultiTaskDataset& dataset,
                                             const MatchingMoments& moments, double lambda, const EvalOptions& opts) {
  if (!(lambda >= 0.0)) throw InputError("lambda must be non-negative");
  ValueAndGradient out = nll_value_and_gradient(params, dataset, opts);
  if (lambda == 0.0) return out;
  const ValueAndGradient kl = kl_value_and_gradient(params, moments);
  out.value += lambda * kl.value;
  out.gradient += lambda * kl.gradient;
  return out;
}

}  // namespace pregp
