#include "pregp/linalg.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "pregp/error.hpp"

namespace pregp {

namespace {

// Pivots at the level of rounding noise mean the factor is meaningless even
// though Eigen reports success.
bool usable_factor(const Eigen::LLT<Eigen::MatrixXd>& llt, double scale) {
  if (llt.info() != Eigen::Success) return false;
  const auto diag = llt.matrixLLT().diagonal();
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    const double p = diag(i);
    if (!std::isfinite(p) || p * p <= 1e-15 * scale) return false;
  }
  return true;
}

}  // namespace

JitteredCholesky::JitteredCholesky(const Eigen::MatrixXd& cov) {
  if (cov.rows() != cov.cols()) throw InputError("cholesky: matrix is not square");
  if (!all_finite(cov)) throw NumericalError("cholesky: matrix has non-finite entries");
  const Eigen::Index n = cov.rows();
  if (n == 0) {
    llt_.compute(cov);
    return;
  }
  const double scale = std::max(cov.diagonal().cwiseAbs().maxCoeff(), 1e-300);
  std::vector<double> attempted;
  for (double jitter : kJitterLevels) {
    attempted.push_back(jitter);
    Eigen::MatrixXd k = cov;
    k.diagonal().array() += jitter;
    llt_.compute(k);
    if (usable_factor(llt_, scale)) {
      jitter_ = jitter;
      log_det_ = 2.0 * llt_.matrixLLT().diagonal().array().log().sum();
      return;
    }
  }
  std::ostringstream msg;
  msg << "cholesky failed after jitter levels";
  for (double j : attempted) msg << ' ' << j;
  throw NumericalError(msg.str(), attempted);
}

Eigen::MatrixXd JitteredCholesky::solve_lower(const Eigen::MatrixXd& rhs) const {
  return llt_.matrixL().solve(rhs);
}

Eigen::MatrixXd JitteredCholesky::inverse() const {
  return llt_.solve(Eigen::MatrixXd::Identity(size(), size()));
}

double min_eigenvalue(const Eigen::MatrixXd& sym) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool all_finite(const Eigen::MatrixXd& m) { return m.allFinite(); }

}  // namespace pregp
