#include "pregp/acquisition.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <random>

#include "pregp/error.hpp"

namespace pregp {

namespace {

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double parse_number(std::string_view s, std::string_view token) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw ParseError("bad number in acquisition '" + std::string(token) + "'");
  return v;
}

}  // namespace

AcquisitionSpec parse_acquisition(std::string_view token) {
  AcquisitionSpec spec;
  const auto colon = token.find(':');
  const std::string_view name = token.substr(0, colon);
  const std::optional<std::string_view> arg =
      colon == std::string_view::npos ? std::nullopt : std::optional(token.substr(colon + 1));
  if (name == "pi") {
    spec.kind = AcquisitionKind::pi;
    if (arg) spec.threshold = parse_number(*arg, token);
    if (spec.threshold < 0) throw ParseError("PI threshold must be non-negative");
  } else if (name == "ei") {
    spec.kind = AcquisitionKind::ei;
    if (arg) throw ParseError("ei takes no argument");
  } else if (name == "ucb") {
    spec.kind = AcquisitionKind::ucb;
    if (arg) spec.zeta = parse_number(*arg, token);
    if (spec.zeta < 0) throw ParseError("UCB coefficient must be non-negative");
  } else {
    throw ParseError("unknown acquisition '" + std::string(token) + "'");
  }
  return spec;
}

std::string format_acquisition(const AcquisitionSpec& spec) {
  char buf[32];
  switch (spec.kind) {
    case AcquisitionKind::pi: return "pi:" + std::string(buf, std::to_chars(buf, buf + sizeof buf, spec.threshold).ptr);
    case AcquisitionKind::ei: return "ei";
    case AcquisitionKind::ucb: return "ucb:" + std::string(buf, std::to_chars(buf, buf + sizeof buf, spec.zeta).ptr);
  }
  return "pi";
}

double score(const AcquisitionSpec& spec, double mu, double sigma, double best_y) {
  if (!(sigma >= 0.0)) throw InputError("predictive deviation must be non-negative");
  switch (spec.kind) {
    case AcquisitionKind::pi: {
      const double target = best_y + spec.threshold;
      if (sigma == 0.0) return mu > target ? kInfiniteScore : -kInfiniteScore;
      return (mu - target) / sigma;
    }
    case AcquisitionKind::ei: {
      if (sigma == 0.0) return std::max(mu - best_y, 0.0);
      const double z = (mu - best_y) / sigma;
      return std::max(sigma * (z * normal_cdf(z) + normal_pdf(z)), 0.0);
    }
    case AcquisitionKind::ucb: return mu + spec.zeta * sigma;
  }
  return 0.0;
}

double gp_ucb_zeta(int n_tasks, int t, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("gp_ucb_zeta: need 0 < delta < 1");
  if (t < 1) throw DomainError("gp_ucb_zeta: need t >= 1");
  if (!(n_tasks > t + 1)) throw DomainError("gp_ucb_zeta: need N > t + 1");
  const double n = n_tasks;
  const double tt = t;
  const double l6 = std::log(6.0 / delta);
  const double b = l6 / (n - tt);
  if (!(2.0 * std::sqrt(b) < 1.0)) throw DomainError("gp_ucb_zeta: need 2 sqrt(b_{t-1}) < 1");
  const double iota_part =
      std::sqrt(6.0 * n * (n - 3.0 + tt + 2.0 * std::sqrt(tt * l6) + 2.0 * l6) / (delta * n * (n - tt - 1.0)));
  const double conf = std::sqrt(2.0 * n * std::log(3.0 / delta));
  return (iota_part + conf) / std::sqrt((n - 1.0) * (1.0 - 2.0 * std::sqrt(b)));
}

Eigen::VectorXd acquisition_values(const AcquisitionSpec& spec, const PosteriorGp& posterior, const Points& x) {
  const PointPredictions p = posterior.predict_diagonal(x);
  Eigen::VectorXd out(x.rows());
  const bool no_data = posterior.data().empty();
  const double best = no_data ? 0.0 : posterior.data().ys.maxCoeff();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double sigma = std::sqrt(std::max(p.variance(i), 0.0));
    if (no_data && spec.kind != AcquisitionKind::ucb) out(i) = p.mean(i);
    else out(i) = score(spec, p.mean(i), sigma, best);
  }
  return out;
}

Choice maximize(const AcquisitionSpec& spec, const PosteriorGp& posterior, const Points& candidates) {
  if (candidates.rows() == 0) throw InputError("acquisition maximization over an empty candidate set");
  const Eigen::VectorXd v = acquisition_values(spec, posterior, candidates);
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (v(i) > v(best)) best = i;
  return {candidates.row(best).transpose(), best, v(best)};
}

Choice maximize(const AcquisitionSpec& spec, const PosteriorGp& posterior, std::uint64_t seed) {
  const BoxSearch budget = std::holds_alternative<BoxSearch>(spec.maximizer) ? std::get<BoxSearch>(spec.maximizer)
                                                                             : BoxSearch{};
  if (budget.n_random < 1) throw InputError("box search needs at least one random sample");
  const auto d = static_cast<Eigen::Index>(posterior.prior().input_dim());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Points samples(budget.n_random, d);
  for (Eigen::Index i = 0; i < samples.rows(); ++i)
    for (Eigen::Index j = 0; j < d; ++j) samples(i, j) = unit(rng);
  Choice c = maximize(spec, posterior, samples);
  c.index.reset();

  double step = 0.1;
  Points probe(1, d);
  for (int s = 0; s < budget.n_local_steps; ++s) {
    bool improved = false;
    for (Eigen::Index j = 0; j < d; ++j) {
      for (double dir : {1.0, -1.0}) {
        probe.row(0) = c.x.transpose();
        probe(0, j) = std::clamp(c.x(j) + dir * step, 0.0, 1.0);
        if (probe(0, j) == c.x(j)) continue;
        const double v = acquisition_values(spec, posterior, probe)(0);
        if (v > c.value) {
          c.value = v;
          c.x = probe.row(0).transpose();
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return c;
}

}  // namespace pregp
