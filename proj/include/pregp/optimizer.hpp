#pragma once

#include <Eigen/Dense>

#include <functional>

namespace pregp {

/// f(theta, grad) -> value; writes the gradient into `grad`.
using ValueGradFn = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

struct IterationRecord {
  int iter = 0;
  double objective = 0.0;
  double grad_norm = 0.0;
  double wall_ms = 0.0;
};

using IterationCallback = std::function<void(const IterationRecord&)>;

struct MinimizeResult {
  Eigen::VectorXd theta;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct LbfgsOptions {
  int max_iters = 200;
  double relative_tolerance = 1e-8;
  int memory = 10;
  int max_backtracks = 40;
};

/// Limited-memory BFGS with Armijo backtracking. Every accepted step strictly
/// decreases the objective. Points where `fn` throws pregp::Error or returns a
/// non-finite value are treated as +inf during the line search; at theta0 the
/// error propagates.
[[nodiscard]] MinimizeResult minimize_lbfgs(const ValueGradFn& fn, const Eigen::VectorXd& theta0,
                                            const LbfgsOptions& opts = {}, const IterationCallback& log = {});

struct StochasticOptions {
  int max_iters = 500;
  double learning_rate = 0.05;
  double decay = 0.01;  ///< step = learning_rate / (1 + decay * k)
  int eval_every = 10;
};

/// Adam on a stochastic gradient with a decaying step. The full objective is
/// evaluated every `eval_every` steps and at the end; the best evaluated point
/// (theta0 included) is returned.
[[nodiscard]] MinimizeResult minimize_stochastic(
    const std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&, int step)>& stochastic_fn,
    const std::function<double(const Eigen::VectorXd&)>& full_value, const Eigen::VectorXd& theta0,
    const StochasticOptions& opts = {}, const IterationCallback& log = {});

}  // namespace pregp
