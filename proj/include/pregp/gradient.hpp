#pragma once

#include <Eigen/Dense>

#include <functional>

namespace pregp {

enum class GradientMode { analytic, finite_difference };

/// A scalar function of the flat parameter vector, optionally with an
/// analytic gradient.
struct FlatObjective {
  std::function<double(const Eigen::VectorXd&)> value;
  /// Returns the value and writes the gradient. May be empty.
  std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)> value_and_gradient;
};

/// Central differences with step h_i = 1e-5 (1 + |theta_i|).
/// Throws EvaluationError carrying the coordinate when a probe is non-finite.
[[nodiscard]] Eigen::VectorXd finite_difference_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                                         const Eigen::VectorXd& theta);

/// Gradient in the requested mode. Analytic mode falls back to differences
/// when the objective has no analytic gradient.
[[nodiscard]] Eigen::VectorXd objective_gradient(const FlatObjective& objective, const Eigen::VectorXd& theta,
                                                 GradientMode mode = GradientMode::analytic);

}  // namespace pregp
