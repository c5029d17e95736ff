#include "pregp/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <deque>
#include <limits>

#include "pregp/error.hpp"

namespace pregp {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

double safe_eval(const ValueGradFn& fn, const Eigen::VectorXd& theta, Eigen::VectorXd& grad) {
  try {
    const double v = fn(theta, grad);
    if (!std::isfinite(v) || !grad.allFinite()) return std::numeric_limits<double>::infinity();
    return v;
  } catch (const Error&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace

MinimizeResult minimize_lbfgs(const ValueGradFn& fn, const Eigen::VectorXd& theta0, const LbfgsOptions& opts,
                              const IterationCallback& log) {
  const auto start = Clock::now();
  MinimizeResult res;
  res.theta = theta0;
  Eigen::VectorXd grad;
  res.value = fn(res.theta, grad);
  if (!std::isfinite(res.value)) throw EvaluationError("objective is not finite at the initial point", 0);
  if (log) log({0, res.value, grad.norm(), elapsed_ms(start)});

  std::deque<Eigen::VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;
  for (int it = 1; it <= opts.max_iters; ++it) {
    const double gnorm = grad.norm();
    if (gnorm == 0.0) {
      res.converged = true;
      break;
    }
    // Two-loop recursion.
    Eigen::VectorXd q = grad;
    std::vector<double> alpha(s_hist.size());
    for (std::size_t k = s_hist.size(); k-- > 0;) {
      alpha[k] = rho_hist[k] * s_hist[k].dot(q);
      q -= alpha[k] * y_hist[k];
    }
    if (!s_hist.empty()) q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    for (std::size_t k = 0; k < s_hist.size(); ++k) {
      const double beta = rho_hist[k] * y_hist[k].dot(q);
      q += (alpha[k] - beta) * s_hist[k];
    }
    Eigen::VectorXd dir = -q;
    double slope = grad.dot(dir);
    if (!(slope < 0.0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      dir = -grad;
      slope = -gnorm * gnorm;
    }
    double step = s_hist.empty() ? std::min(1.0, 1.0 / gnorm) : 1.0;

    Eigen::VectorXd trial_grad;
    Eigen::VectorXd trial;
    double trial_value = std::numeric_limits<double>::infinity();
    bool accepted = false;
    for (int bt = 0; bt < opts.max_backtracks; ++bt) {
      trial = res.theta + step * dir;
      trial_value = safe_eval(fn, trial, trial_grad);
      if (trial_value <= res.value + 1e-4 * step * slope && trial_value < res.value) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      res.converged = true;
      break;
    }
    const Eigen::VectorXd s = trial - res.theta;
    const Eigen::VectorXd y = trial_grad - grad;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      s_hist.push_back(s);
      y_hist.push_back(y);
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > opts.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    const double decrease = res.value - trial_value;
    res.theta = trial;
    res.value = trial_value;
    grad = trial_grad;
    res.iterations = it;
    if (log) log({it, res.value, grad.norm(), elapsed_ms(start)});
    if (decrease < opts.relative_tolerance * std::max(1.0, std::abs(res.value))) {
      res.converged = true;
      break;
    }
  }
  return res;
}

MinimizeResult minimize_stochastic(
    const std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&, int step)>& stochastic_fn,
    const std::function<double(const Eigen::VectorXd&)>& full_value, const Eigen::VectorXd& theta0,
    const StochasticOptions& opts, const IterationCallback& log) {
  const auto start = Clock::now();
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  MinimizeResult best;
  best.theta = theta0;
  best.value = full_value(theta0);
  if (!std::isfinite(best.value)) throw EvaluationError("objective is not finite at the initial point", 0);
  if (log) log({0, best.value, 0.0, elapsed_ms(start)});

  Eigen::VectorXd theta = theta0;
  Eigen::VectorXd m = Eigen::VectorXd::Zero(theta.size());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(theta.size());
  Eigen::VectorXd grad;
  for (int k = 1; k <= opts.max_iters; ++k) {
    double value;
    try {
      value = stochastic_fn(theta, grad, k);
    } catch (const Error&) {
      break;
    }
    if (!std::isfinite(value) || !grad.allFinite()) break;
    m = kBeta1 * m + (1.0 - kBeta1) * grad;
    v = kBeta2 * v + (1.0 - kBeta2) * grad.cwiseAbs2();
    const double lr = opts.learning_rate / (1.0 + opts.decay * k);
    const double c1 = 1.0 - std::pow(kBeta1, k);
    const double c2 = 1.0 - std::pow(kBeta2, k);
    theta -= (lr * (m / c1).array() / ((v / c2).array().sqrt() + kEps)).matrix();
    best.iterations = k;
    if (k % opts.eval_every == 0 || k == opts.max_iters) {
      double full;
      try {
        full = full_value(theta);
      } catch (const Error&) {
        full = std::numeric_limits<double>::infinity();
      }
      if (log) log({k, full, grad.norm(), elapsed_ms(start)});
      if (full < best.value) {
        best.value = full;
        best.theta = theta;
      }
    }
  }
  best.converged = true;
  return best;
}

}  // namespace pregp
