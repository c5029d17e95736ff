#include "pregp/gradient.hpp"

#include <cmath>

#include "pregp/error.hpp"

namespace pregp {

Eigen::VectorXd finite_difference_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                           const Eigen::VectorXd& theta) {
  if (!std::isfinite(f(theta))) throw EvaluationError("objective is not finite at theta", 0);
  Eigen::VectorXd grad(theta.size());
  Eigen::VectorXd probe = theta;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    const double h = 1e-5 * (1.0 + std::abs(theta(i)));
    probe(i) = theta(i) + h;
    const double up = f(probe);
    probe(i) = theta(i) - h;
    const double down = f(probe);
    probe(i) = theta(i);
    if (!std::isfinite(up) || !std::isfinite(down))
      throw EvaluationError("non-finite objective while differencing coordinate " + std::to_string(i),
                            static_cast<std::size_t>(i));
    grad(i) = (up - down) / (2.0 * h);
  }
  return grad;
}

Eigen::VectorXd objective_gradient(const FlatObjective& objective, const Eigen::VectorXd& theta, GradientMode mode) {
  if (mode == GradientMode::analytic && objective.value_and_gradient) {
    Eigen::VectorXd grad;
    const double v = objective.value_and_gradient(theta, grad);
    if (!std::isfinite(v)) throw EvaluationError("objective is not finite at theta", 0);
    return grad;
  }
  if (!objective.value) throw InputError("objective has no value function");
  return finite_difference_gradient(objective.value, theta);
}

}  // namespace pregp
