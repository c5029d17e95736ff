#include "pregp/matching.hpp"

#include <optional>

#include "pregp/error.hpp"

namespace pregp {

namespace {

std::optional<Eigen::Index> find_within(const Points& xs, const Eigen::RowVectorXd& x, double tol) {
  for (Eigen::Index i = 0; i < xs.rows(); ++i)
    if ((xs.row(i) - x).cwiseAbs().maxCoeff() <= tol) return i;
  return std::nullopt;
}

}  // namespace

MatchingMoments extract_matching(const MultiTaskDataset& dataset, double tol, bool unbiased) {
  const std::size_t n = dataset.n_tasks();
  if (n < 2) throw InputError("matching data needs at least two tasks");
  const auto& first = dataset.tasks.front().observations;
  std::vector<Eigen::RowVectorXd> rows;
  std::vector<Eigen::VectorXd> ys;
  for (Eigen::Index i = 0; i < first.size(); ++i) {
    const Eigen::RowVectorXd x = first.xs.row(i);
    bool seen = false;
    for (const auto& r : rows)
      if ((r - x).cwiseAbs().maxCoeff() <= tol) seen = true;
    if (seen) continue;
    Eigen::VectorXd y(static_cast<Eigen::Index>(n));
    y(0) = first.ys(i);
    bool everywhere = true;
    for (std::size_t t = 1; t < n && everywhere; ++t) {
      const auto& obs = dataset.tasks[t].observations;
      const auto j = find_within(obs.xs, x, tol);
      if (j) y(static_cast<Eigen::Index>(t)) = obs.ys(*j);
      else everywhere = false;
    }
    if (!everywhere) continue;
    rows.push_back(x);
    ys.push_back(y);
  }
  if (rows.empty()) throw NoMatchingDataError("no matching data: no input is shared by every task (tolerance " + std::to_string(tol) + ")");
  const auto m = static_cast<Eigen::Index>(rows.size());
  Points inputs(m, static_cast<Eigen::Index>(dataset.dim()));
  Eigen::MatrixXd y(m, static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < m; ++i) {
    inputs.row(i) = rows[i];
    y.row(i) = ys[i].transpose();
  }
  return estimate_moments(std::move(inputs), std::move(y), unbiased);
}

}  // namespace pregp
