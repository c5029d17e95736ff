#include <doctest.h>

#include "pregp/acquisition.hpp"
#include "pregp/error.hpp"
#include "pregp/posterior.hpp"
#include "support.hpp"

using namespace pregp;

namespace {
AcquisitionSpec spec_of(AcquisitionKind kind) {
  AcquisitionSpec s;
  s.kind = kind;
  return s;
}

// Written directly from the displayed coefficient.
double zeta_transcription(double n, double t, double delta) {
  const double l = std::log(6.0 / delta);
  const double top = std::pow(6.0 * n * (n - 3.0 + t + 2.0 * std::sqrt(t * l) + 2.0 * l) / (delta * n * (n - t - 1.0)), 0.5) +
                     std::pow(2.0 * n * std::log(3.0 / delta), 0.5);
  const double bottom = std::pow((n - 1.0) * (1.0 - 2.0 * std::pow(l / (n - t), 0.5)), 0.5);
  return top / bottom;
}

PosteriorGp random_posterior(std::mt19937_64& rng, int n) {
  const auto p = testing::random_params(rng, Architecture::const_matern, 2);
  return condition(p, ObservationSet(testing::uniform_points(rng, n, 2), testing::uniform_vector(rng, n, -1.0, 1.0)));
}
}  // namespace

TEST_CASE("scores") {
  const auto pi = spec_of(AcquisitionKind::pi);
  const auto ei = spec_of(AcquisitionKind::ei);
  const auto ucb = spec_of(AcquisitionKind::ucb);
  CHECK(score(pi, 1.1, 0.7, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(score(ucb, 0.3, 0.0, 5.0) == 0.3);
  CHECK(score(ei, 0.5, 1.0, 0.5) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-14));
  CHECK(score(ei, 0.5, 1.0, 0.5) == doctest::Approx(0.3989).epsilon(1e-4));
  CHECK(score(ucb, 0.3, 0.5, 0.0) == 0.3 + 1.8 * 0.5);
  CHECK_THROWS_AS((void)score(pi, 0.0, -1.0, 0.0), InputError);

  SUBCASE("zero deviation limits") {
    CHECK(score(pi, 2.0, 0.0, 1.0) == kInfiniteScore);
    CHECK(score(pi, 1.0, 0.0, 1.0) == -kInfiniteScore);
    CHECK(score(ei, 2.0, 0.0, 1.0) == 1.0);
    CHECK(score(ei, 0.0, 0.0, 1.0) == 0.0);
    CHECK(score(ei, 2.0, 1e-9, 1.0) == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("strictly increasing in the mean, EI non-negative") {
    // |z| stays below 25 so the EI tail is representable in double precision.
    std::mt19937_64 rng(20);
    for (int rep = 0; rep < 200; ++rep) {
      const double sigma = testing::uniform(rng, 0.2, 2.0);
      const double mu = testing::uniform(rng, -3.0, 3.0);
      const double best = testing::uniform(rng, -1.0, 1.0);
      for (const auto& s : {pi, ei, ucb}) CHECK(score(s, mu + 0.1, sigma, best) > score(s, mu, sigma, best));
      CHECK(score(ei, mu, sigma, best) >= 0.0);
    }
  }
}

TEST_CASE("acquisition tokens") {
  CHECK(parse_acquisition("pi").threshold == 0.1);
  CHECK(parse_acquisition("pi:0.25").threshold == 0.25);
  CHECK(parse_acquisition("ucb").zeta == 1.8);
  CHECK(parse_acquisition("ucb:3").zeta == 3.0);
  CHECK(parse_acquisition("ei").kind == AcquisitionKind::ei);
  CHECK(format_acquisition(parse_acquisition("ucb:2.5")) == "ucb:2.5");
  CHECK_THROWS_AS((void)parse_acquisition("pi:-1"), ParseError);
  CHECK_THROWS_AS((void)parse_acquisition("poi"), ParseError);
  CHECK_THROWS_AS((void)parse_acquisition("ucb:x"), ParseError);
}

TEST_CASE("GP-UCB coefficient") {
  CHECK(std::abs(gp_ucb_zeta(100, 1, 0.1) - zeta_transcription(100, 1, 0.1)) <= 1e-12 * zeta_transcription(100, 1, 0.1));
  double prev = 0.0;
  for (int t = 1; t <= 20; ++t) {
    const double z = gp_ucb_zeta(100, t, 0.1);
    CHECK(std::isfinite(z));
    CHECK(z >= prev);
    prev = z;
  }
  CHECK(gp_ucb_zeta(100, 5, 0.01) > gp_ucb_zeta(100, 5, 0.1));
  CHECK_THROWS_AS((void)gp_ucb_zeta(100, 5, 1.5), DomainError);
  CHECK_THROWS_AS((void)gp_ucb_zeta(6, 5, 0.1), DomainError);
  CHECK_THROWS_AS((void)gp_ucb_zeta(12, 5, 0.1), DomainError);  // 2 sqrt(b) >= 1
}

TEST_CASE("maximization over candidates") {
  std::mt19937_64 rng(21);
  const auto post = random_posterior(rng, 4);
  const auto pi = spec_of(AcquisitionKind::pi);

  const Points one = testing::uniform_points(rng, 1, 2);
  const auto c1 = maximize(pi, post, one);
  CHECK(c1.index == 0);
  CHECK(c1.x == one.row(0).transpose());

  Points twins(2, 2);
  twins.row(0) = one.row(0);
  twins.row(1) = one.row(0);
  CHECK(maximize(pi, post, twins).index == 0);
  CHECK_THROWS_AS((void)maximize(pi, post, Points(0, 2)), InputError);

  for (auto kind : {AcquisitionKind::pi, AcquisitionKind::ei, AcquisitionKind::ucb}) {
    const Points cands = testing::uniform_points(rng, 50, 2);
    const auto spec = spec_of(kind);
    const auto pred = post.predict_diagonal(cands);
    const double best_y = post.data().ys.maxCoeff();
    Eigen::Index oracle = 0;
    double oracle_v = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < 50; ++i) {
      const double v = score(spec, pred.mean(i), std::sqrt(pred.variance(i)), best_y);
      if (v > oracle_v) {
        oracle_v = v;
        oracle = i;
      }
    }
    CHECK(maximize(spec, post, cands).index == oracle);
  }
}

TEST_CASE("argmax is invariant to shifting every value") {
  std::mt19937_64 rng(22);
  const auto p = GpParams::const_matern(0.0, 1.0, Eigen::Vector2d(0.3, 0.3), 0.01);
  const Points x = testing::uniform_points(rng, 5, 2);
  const Eigen::VectorXd y = testing::uniform_vector(rng, 5, -1.0, 1.0);
  const auto shifted_p = GpParams::const_matern(3.0, 1.0, Eigen::Vector2d(0.3, 0.3), 0.01);
  const Points cands = testing::uniform_points(rng, 40, 2);
  for (auto kind : {AcquisitionKind::pi, AcquisitionKind::ei, AcquisitionKind::ucb}) {
    const auto a = maximize(spec_of(kind), condition(p, ObservationSet(x, y)), cands);
    const auto b = maximize(spec_of(kind), condition(shifted_p, ObservationSet(x, y.array() + 3.0)), cands);
    CHECK(a.index == b.index);
  }
}

TEST_CASE("box search") {
  std::mt19937_64 rng(23);
  const auto post = random_posterior(rng, 5);
  AcquisitionSpec spec = spec_of(AcquisitionKind::ucb);
  spec.maximizer = BoxSearch{200, 30};
  const auto a = maximize(spec, post, std::uint64_t{9});
  const auto b = maximize(spec, post, std::uint64_t{9});
  CHECK(a.x == b.x);
  CHECK(!a.index);
  CHECK(((a.x.array() >= 0.0) && (a.x.array() <= 1.0)).all());
  // Refinement never loses to the best random sample.
  spec.maximizer = BoxSearch{200, 0};
  CHECK(a.value >= maximize(spec, post, std::uint64_t{9}).value);
  spec.maximizer = BoxSearch{0, 5};
  CHECK_THROWS_AS((void)maximize(spec, post, std::uint64_t{1}), InputError);
}

TEST_CASE("acquisition with no data follows the prior mean") {
  const auto p = GpParams::const_matern(0.5, 1.0, Eigen::VectorXd::Constant(1, 0.3), 0.01);
  const auto post = condition(p, ObservationSet(Points(0, 1), Eigen::VectorXd(0)));
  Points x(3, 1);
  x << 0.1, 0.5, 0.9;
  CHECK(acquisition_values(spec_of(AcquisitionKind::pi), post, x).isApproxToConstant(0.5));
  CHECK(maximize(spec_of(AcquisitionKind::pi), post, x).index == 0);
}
