#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "pregp/empirical_gp.hpp"
#include "pregp/error.hpp"
#include "pregp/gp_prior.hpp"
#include "pregp/linalg.hpp"
#include "pregp/moments.hpp"
#include "pregp/posterior.hpp"
#include "support.hpp"

using namespace pregp;
using testing::close;

namespace {
GpParams scalar_matern(double amp, double ls, double noise, double mean = 0.0) {
  return GpParams::const_matern(mean, amp, Eigen::VectorXd::Constant(1, ls), noise);
}
Points column(std::initializer_list<double> v) {
  Points p(static_cast<Eigen::Index>(v.size()), 1);
  Eigen::Index i = 0;
  for (double x : v) p(i++, 0) = x;
  return p;
}
}  // namespace

TEST_CASE("matern kernel diagonal, symmetry and closed form") {
  const auto p = scalar_matern(1.0, 1.0, 0.01);
  const Points x = column({0.0, 1.0, 0.3});
  const auto k = kernel_matrix(p, x, x);
  CHECK(k.diagonal().isApproxToConstant(1.0));
  CHECK(k == k.transpose());
  CHECK(k(0, 1) == doctest::Approx((1.0 + std::sqrt(3.0)) * std::exp(-std::sqrt(3.0))).epsilon(1e-14));
  CHECK(k(0, 1) == doctest::Approx(0.4834).epsilon(1e-3));
}

TEST_CASE("kernel diagonal equals amplitude squared") {
  std::mt19937_64 rng(1);
  for (auto arch : {Architecture::const_matern, Architecture::mlp_matern}) {
    const auto p = testing::random_params(rng, arch, 3);
    const Points x = testing::uniform_points(rng, 5, 3);
    const auto k = kernel_matrix(p, x, x);
    for (Eigen::Index i = 0; i < 5; ++i) CHECK(close(k(i, i), p.amplitude() * p.amplitude(), 1e-14));
  }
}

TEST_CASE("kernel matrix is PSD on random problems") {
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 200; ++rep) {
    const auto arch = rep % 2 ? Architecture::mlp_matern : Architecture::const_matern;
    const std::size_t d = 1 + rep % 3;
    const auto p = testing::random_params(rng, arch, d);
    const Points x = testing::uniform_points(rng, 1 + rep % 8, static_cast<Eigen::Index>(d));
    CHECK(min_eigenvalue(kernel_matrix(p, x, x)) >= -1e-8);
  }
}

TEST_CASE("kernel dimension mismatch is an input error") {
  const auto p = scalar_matern(1.0, 1.0, 0.1);
  CHECK_THROWS_AS((void)kernel_matrix(p, Points::Zero(2, 2), Points::Zero(2, 2)), InputError);
  CHECK_THROWS_AS((void)mean_vector(p, Points::Zero(2, 3)), InputError);
}

TEST_CASE("non-finite parameters are rejected") {
  Eigen::VectorXd flat = scalar_matern(1.0, 1.0, 0.1).pack();
  flat(1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(GpParams(ModelArchitecture{}, 1, flat), ParameterError);
}

TEST_CASE("mean vector") {
  SUBCASE("constant mean") {
    const auto p = scalar_matern(1.0, 1.0, 0.1, 0.0);
    CHECK(mean_vector(p, column({0.1, 0.5, 0.9})).isZero());
  }
  SUBCASE("mlp with zero mean weights returns the offset") {
    std::mt19937_64 rng(3);
    const auto h = static_cast<Eigen::Index>(kHiddenWidth);
    const auto p = GpParams::mlp_matern(Eigen::MatrixXd::Random(h, 2), Eigen::VectorXd::Random(h),
                                        Eigen::VectorXd::Zero(h), 0.7, 1.0, Eigen::VectorXd::Ones(h), 0.1);
    CHECK(mean_vector(p, testing::uniform_points(rng, 4, 2)).isApproxToConstant(0.7));
  }
  SUBCASE("mlp forward pass at the origin") {
    const auto h = static_cast<Eigen::Index>(kHiddenWidth);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(h, 1);
    w(0, 0) = 1.0;
    const auto p = GpParams::mlp_matern(w, Eigen::VectorXd::Zero(h), Eigen::VectorXd::Unit(h, 0), 0.0, 1.0,
                                        Eigen::VectorXd::Ones(h), 0.1);
    CHECK(mean_vector(p, column({0.0}))(0) == 0.0);
    CHECK(mean_vector(p, column({0.5}))(0) == doctest::Approx(std::tanh(0.5)));
  }
}

TEST_CASE("prior marginal") {
  const auto p = scalar_matern(1.0, 0.5, 0.01);
  const auto single = prior_marginal(p, column({0.4}));
  CHECK(single.cov(0, 0) == doctest::Approx(1.01).epsilon(1e-14));
  CHECK_THROWS_AS((void)prior_marginal(p, Points(0, 1)), InputError);

  std::mt19937_64 rng(4);
  for (auto arch : {Architecture::const_matern, Architecture::mlp_matern}) {
    const auto q = testing::random_params(rng, arch, 2);
    const Points x = testing::uniform_points(rng, 3, 2);
    const auto m = prior_marginal(q, x);
    const Eigen::MatrixXd k = kernel_matrix(q, x, x);
    CHECK((m.cov - q.noise_variance() * Eigen::MatrixXd::Identity(3, 3) - k).cwiseAbs().maxCoeff() < 1e-15);
    const Eigen::MatrixXd oracle_cov =
        testing::oracle_kernel(q, x, x) + q.noise_variance() * Eigen::MatrixXd::Identity(3, 3);
    for (Eigen::Index i = 0; i < 3; ++i) {
      CHECK(close(m.mean(i), testing::oracle_mean(q, x)(i), 1e-12));
      for (Eigen::Index j = 0; j < 3; ++j) CHECK(close(m.cov(i, j), oracle_cov(i, j), 1e-12));
    }
  }
}

TEST_CASE("pack and unpack are inverse") {
  std::mt19937_64 rng(5);
  for (auto arch : {Architecture::const_matern, Architecture::mlp_matern}) {
    const auto p = testing::random_params(rng, arch, 3);
    const auto q = GpParams::unpack(p.architecture(), 3, p.pack());
    CHECK(q == p);
    CHECK(q.pack() == p.pack());
  }
}

TEST_CASE("model document round-trips bit-exactly") {
  std::mt19937_64 rng(6);
  for (auto arch : {Architecture::const_matern, Architecture::mlp_matern}) {
    const auto p = testing::random_params(rng, arch, 2);
    const auto q = deserialize_params(serialize_params(p));
    CHECK(q == p);
    for (Eigen::Index i = 0; i < p.pack().size(); ++i) CHECK(q.pack()(i) == p.pack()(i));
  }
  CHECK_THROWS_AS((void)deserialize_params("{\"format\":\"pregp-model\"}"), ParseError);
  CHECK_THROWS_AS((void)deserialize_params("not json"), ParseError);
}

TEST_CASE("conditioning") {
  SUBCASE("no data reproduces the prior") {
    std::mt19937_64 rng(7);
    const auto p = testing::random_params(rng, Architecture::mlp_matern, 2);
    const auto post = condition(p, ObservationSet(Points(0, 2), Eigen::VectorXd(0)));
    const Points x = testing::uniform_points(rng, 4, 2);
    const auto pred = post.predict(x);
    CHECK((pred.mean - mean_vector(p, x)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((pred.cov - kernel_matrix(p, x, x)).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("one observation, hand arithmetic") {
    const auto p = scalar_matern(1.0, 1.0, 0.1);
    const auto post = condition(p, ObservationSet(column({0.0}), Eigen::VectorXd::Constant(1, 1.0)));
    const auto pred = post.predict_diagonal(column({1.0}));
    const double k10 = testing::oracle_matern32(1.0);
    CHECK(pred.mean(0) == doctest::Approx(k10 / 1.1).epsilon(1e-12));
    CHECK(pred.variance(0) == doctest::Approx(1.0 - k10 * k10 / 1.1).epsilon(1e-12));
  }
  SUBCASE("near-zero noise interpolates") {
    const auto p = scalar_matern(1.0, 0.3, 1e-300);
    const auto post = condition(p, ObservationSet(column({0.1, 0.5, 0.8}), Eigen::Vector3d(0.2, -1.0, 0.4)));
    const auto pred = post.predict_diagonal(column({0.5}));
    CHECK(std::abs(pred.mean(0) + 1.0) <= 1e-6);
    CHECK(pred.variance(0) <= 1e-6);
  }
  SUBCASE("duplicate inputs without noise need jitter") {
    const auto p = scalar_matern(1.0, 0.3, 1e-300);
    const auto post = condition(p, ObservationSet(column({0.5, 0.5}), Eigen::Vector2d(1.0, 1.0)));
    CHECK(post.jitter() > 0.0);
  }
  SUBCASE("permutation invariance and contraction") {
    std::mt19937_64 rng(8);
    for (int rep = 0; rep < 20; ++rep) {
      const auto p = testing::random_params(rng, rep % 2 ? Architecture::mlp_matern : Architecture::const_matern, 2);
      const Points x = testing::uniform_points(rng, 6, 2);
      const Eigen::VectorXd y = testing::uniform_vector(rng, 6, -1.0, 1.0);
      std::vector<int> perm(6);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      Points xp(6, 2);
      Eigen::VectorXd yp(6);
      for (int i = 0; i < 6; ++i) {
        xp.row(i) = x.row(perm[i]);
        yp(i) = y(perm[i]);
      }
      const Points q = testing::uniform_points(rng, 5, 2);
      const auto a = condition(p, ObservationSet(x, y)).predict(q);
      const auto b = condition(p, ObservationSet(xp, yp)).predict(q);
      CHECK((a.mean - b.mean).cwiseAbs().maxCoeff() < 1e-10);
      CHECK((a.cov - b.cov).cwiseAbs().maxCoeff() < 1e-10);
      const Eigen::VectorXd prior_var = kernel_matrix(p, q, q).diagonal();
      CHECK(((a.cov.diagonal() - prior_var).array() <= 1e-10).all());
    }
  }
}

TEST_CASE("jittered cholesky escalates and reports failures") {
  Eigen::MatrixXd singular = Eigen::MatrixXd::Ones(3, 3);
  const JitteredCholesky chol(singular);
  CHECK(chol.jitter() > 0.0);
  Eigen::MatrixXd negative = -Eigen::MatrixXd::Identity(2, 2);
  try {
    (void)JitteredCholesky(negative);
    FAIL("expected a numerical error");
  } catch (const NumericalError& e) {
    CHECK(e.attempted_jitter().size() == kJitterLevels.size());
    CHECK(e.exit_code() == 4);
  }
}

TEST_CASE("log marginal likelihood") {
  const auto p = scalar_matern(1.0, 1.0, 1e-300);
  const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  CHECK(log_marginal_likelihood(p, ObservationSet(column({0.3}), Eigen::VectorXd::Constant(1, 0.0))) ==
        doctest::Approx(-half_log_2pi).epsilon(1e-12));
  CHECK(log_marginal_likelihood(p, ObservationSet(column({0.3}), Eigen::VectorXd::Constant(1, 1.0))) ==
        doctest::Approx(-half_log_2pi - 0.5).epsilon(1e-12));
  CHECK_THROWS_AS((void)log_marginal_likelihood(p, ObservationSet(Points(0, 1), Eigen::VectorXd(0))), InputError);

  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 10; ++rep) {
    const auto q = testing::random_params(rng, rep % 2 ? Architecture::mlp_matern : Architecture::const_matern, 2);
    const Points x = testing::uniform_points(rng, 4, 2);
    const Eigen::VectorXd y = testing::uniform_vector(rng, 4, -1.0, 1.0);
    const double oracle = testing::dense_log_density(
        y, testing::oracle_mean(q, x), testing::oracle_kernel(q, x, x) + q.noise_variance() * Eigen::MatrixXd::Identity(4, 4));
    CHECK(close(log_marginal_likelihood(q, ObservationSet(x, y)), oracle, 1e-8));
  }
}

TEST_CASE("empirical gp reproduces its moments") {
  std::mt19937_64 rng(10);
  const Points x = testing::uniform_points(rng, 5, 2);
  const Eigen::MatrixXd y = Eigen::MatrixXd::Random(5, 7);
  const auto m = estimate_moments(x, y);
  const auto gp = empirical_gp(m);
  CHECK(gp.mean_vector(x) == m.mu_tilde);
  CHECK(gp.kernel_matrix(x, x) == m.k_tilde);

  double min_dist = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < 5; ++i)
    for (Eigen::Index j = i + 1; j < 5; ++j) min_dist = std::min(min_dist, (x.row(i) - x.row(j)).norm());
  Points shifted = x;
  shifted.col(0).array() += 0.49 * min_dist / std::sqrt(2.0);
  shifted.col(1).array() += 0.49 * min_dist / std::sqrt(2.0);
  CHECK(gp.mean_vector(shifted) == m.mu_tilde);
  CHECK(gp.kernel_matrix(shifted, x) == m.k_tilde);

  Points tie(2, 1);
  tie << 0.0, 1.0;
  const EmpiricalGp tied(estimate_moments(tie, Eigen::MatrixXd::Random(2, 3)));
  CHECK(tied.nearest(Eigen::RowVectorXd::Constant(1, 0.5)) == 0);
}
