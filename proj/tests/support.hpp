#pragma once

// Shared fixtures and brute-force oracles for the unit and acceptance tests.
// Oracles here are written from the textbook formulas and never call into the
// library's numerical code.

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <unistd.h>

#include "pregp/gp_params.hpp"

namespace testing {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

inline MatrixXd uniform_points(std::mt19937_64& rng, Eigen::Index n, Eigen::Index d) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  MatrixXd x(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = u(rng);
  return x;
}

inline VectorXd uniform_vector(std::mt19937_64& rng, Eigen::Index n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline pregp::GpParams random_params(std::mt19937_64& rng, pregp::Architecture arch, std::size_t d) {
  const double amp = std::exp(uniform(rng, -0.5, 0.5));
  const double noise = std::exp(uniform(rng, -4.0, -1.0));
  if (arch == pregp::Architecture::const_matern)
    return pregp::GpParams::const_matern(uniform(rng, -1.0, 1.0), amp,
                                         uniform_vector(rng, static_cast<Eigen::Index>(d), -1.5, 0.3).array().exp(),
                                         noise);
  const auto h = static_cast<Eigen::Index>(pregp::kHiddenWidth);
  MatrixXd w(h, static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < w.rows(); ++i) w.row(i) = uniform_vector(rng, w.cols(), -2.0, 2.0).transpose();
  return pregp::GpParams::mlp_matern(w, uniform_vector(rng, h, -1.0, 1.0), uniform_vector(rng, h, -1.0, 1.0),
                                     uniform(rng, -1.0, 1.0), amp, uniform_vector(rng, h, -1.0, 0.5).array().exp(),
                                     noise);
}

// ---- independent GP oracle ------------------------------------------------

inline MatrixXd oracle_features(const pregp::GpParams& p, const MatrixXd& x) {
  if (p.architecture().variant == pregp::Architecture::const_matern) return x;
  const MatrixXd w = p.feature_weights();
  const VectorXd b = p.feature_bias();
  MatrixXd u(x.rows(), w.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index h = 0; h < w.rows(); ++h) {
      double s = b(h);
      for (Eigen::Index j = 0; j < x.cols(); ++j) s += w(h, j) * x(i, j);
      u(i, h) = std::tanh(s);
    }
  return u;
}

inline double oracle_matern32(double r) { return (1.0 + std::sqrt(3.0) * r) * std::exp(-std::sqrt(3.0) * r); }

inline MatrixXd oracle_kernel(const pregp::GpParams& p, const MatrixXd& x, const MatrixXd& x2) {
  const MatrixXd u = oracle_features(p, x);
  const MatrixXd u2 = oracle_features(p, x2);
  const VectorXd ls = p.lengthscales();
  MatrixXd k(x.rows(), x2.rows());
  for (Eigen::Index i = 0; i < u.rows(); ++i)
    for (Eigen::Index j = 0; j < u2.rows(); ++j) {
      double s = 0.0;
      for (Eigen::Index c = 0; c < u.cols(); ++c) s += std::pow((u(i, c) - u2(j, c)) / ls(c), 2);
      k(i, j) = p.amplitude() * p.amplitude() * oracle_matern32(std::sqrt(s));
    }
  return k;
}

inline VectorXd oracle_mean(const pregp::GpParams& p, const MatrixXd& x) {
  if (p.architecture().variant == pregp::Architecture::const_matern)
    return VectorXd::Constant(x.rows(), p.mean_offset());
  return oracle_features(p, x) * p.mean_weights() + VectorXd::Constant(x.rows(), p.mean_offset());
}

/// log N(y; m, S) through an explicit determinant and inverse.
inline double dense_log_density(const VectorXd& y, const VectorXd& m, const MatrixXd& s) {
  const Eigen::FullPivLU<MatrixXd> lu(s);
  const VectorXd r = y - m;
  return -0.5 * (r.dot(lu.inverse() * r) + std::log(lu.determinant()) +
                 static_cast<double>(y.size()) * std::log(2.0 * std::numbers::pi));
}

/// Full Gaussian KL(N(m0, S0) || N(m1, S1)) through explicit inverse and determinants.
inline double dense_gaussian_kl(const VectorXd& m0, const MatrixXd& s0, const VectorXd& m1, const MatrixXd& s1) {
  const MatrixXd inv1 = s1.inverse();
  const VectorXd d = m1 - m0;
  return 0.5 * ((inv1 * s0).trace() + d.dot(inv1 * d) - static_cast<double>(m0.size()) +
                std::log(s1.determinant() / s0.determinant()));
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() / ("pregp_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

}  // namespace testing
