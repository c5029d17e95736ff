#include "pregp/oracle.hpp"

#include <cmath>

namespace pregp {

TableOracle::TableOracle(Points xs, Eigen::VectorXd ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
  if (xs_.rows() == 0) throw InputError("table oracle needs at least one row");
  if (xs_.rows() != ys_.size()) throw InputError("table oracle: |xs| != |ys|");
  if (!ys_.allFinite()) throw InputError("table oracle: non-finite value");
}

Evaluation TableOracle::evaluate(const Point& x) {
  if (x.size() != xs_.cols()) throw InputError("table oracle: point has the wrong dimension");
  Eigen::Index best = 0;
  double best_d2 = (xs_.row(0).transpose() - x).squaredNorm();
  for (Eigen::Index i = 1; i < xs_.rows(); ++i) {
    const double d2 = (xs_.row(i).transpose() - x).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return evaluate_index(best);
}

Evaluation TableOracle::evaluate_index(Eigen::Index index) {
  if (index < 0 || index >= xs_.rows()) throw InputError("table oracle: index out of range");
  return {ys_(index), true, ys_(index)};
}

Evaluation FunctionOracle::evaluate(const Point& x) {
  if (static_cast<std::size_t>(x.size()) != dim_) throw InputError("function oracle: point has the wrong dimension");
  const std::optional<double> y = fn_(x);
  if (!y) return {kInfeasibleValue, false, std::nullopt};
  if (!std::isfinite(*y)) throw OracleError("function oracle returned a non-finite value");
  return {*y, true, std::nullopt};
}

}  // namespace pregp
