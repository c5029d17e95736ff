#include "pregp/synth.hpp"

#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "pregp/error.hpp"
#include "pregp/gp_prior.hpp"
#include "pregp/linalg.hpp"

namespace pregp {

namespace {

constexpr std::size_t kMaxJointGrid = 1000;
constexpr double kAnchorBudget = 625.0;
constexpr std::uint64_t kMatchedStream = 0xFFFF'FFFF;
constexpr std::uint64_t kTestStreamBase = 1'000'000;

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

Eigen::VectorXd standard_normals(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = normal(rng);
  return z;
}

Points regular_grid(std::size_t dim, std::size_t per_dim) {
  const auto n = static_cast<Eigen::Index>(std::pow(static_cast<double>(per_dim), static_cast<double>(dim)) + 0.5);
  Points g(n, static_cast<Eigen::Index>(dim));
  const double step = per_dim > 1 ? 1.0 / static_cast<double>(per_dim - 1) : 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    auto rest = static_cast<std::size_t>(i);
    for (std::size_t j = 0; j < dim; ++j) {
      g(i, static_cast<Eigen::Index>(j)) = static_cast<double>(rest % per_dim) * step;
      rest /= per_dim;
    }
  }
  return g;
}

// Joint latent draw mean + L z at the given points.
Eigen::VectorXd joint_sample(const ParametricGp& gp, const Points& x, std::mt19937_64& rng) {
  const JitteredCholesky chol(gp.kernel_matrix(x, x));
  return gp.mean_vector(x) + chol.lower() * standard_normals(x.rows(), rng);
}

}  // namespace

std::size_t default_grid_per_dim(std::size_t dim) {
  if (dim <= 2) return 200;
  return std::max<std::size_t>(2, static_cast<std::size_t>(std::floor(std::pow(40000.0, 1.0 / static_cast<double>(dim)))));
}

GridFunction::GridFunction(std::size_t dim, std::size_t per_dim, Eigen::VectorXd values)
    : dim_(dim), per_dim_(per_dim), values_(std::move(values)) {
  if (dim == 0 || per_dim < 2) throw InputError("grid needs d >= 1 and at least 2 points per dimension");
  const double expected = std::pow(static_cast<double>(per_dim), static_cast<double>(dim));
  if (static_cast<double>(values_.size()) != expected) throw InputError("grid values do not match the grid size");
}

double GridFunction::operator()(const Point& x) const {
  if (static_cast<std::size_t>(x.size()) != dim_) throw InputError("grid function: wrong dimension");
  Eigen::Index flat = 0;
  Eigen::Index stride = 1;
  for (std::size_t j = 0; j < dim_; ++j) {
    const double u = std::clamp(x(static_cast<Eigen::Index>(j)), 0.0, 1.0);
    const auto idx = static_cast<Eigen::Index>(std::lround(u * static_cast<double>(per_dim_ - 1)));
    flat += idx * stride;
    stride *= static_cast<Eigen::Index>(per_dim_);
  }
  return values_(flat);
}

Point GridFunction::grid_point(Eigen::Index flat_index) const {
  Point p(static_cast<Eigen::Index>(dim_));
  auto rest = static_cast<std::size_t>(flat_index);
  for (std::size_t j = 0; j < dim_; ++j) {
    p(static_cast<Eigen::Index>(j)) = static_cast<double>(rest % per_dim_) / static_cast<double>(per_dim_ - 1);
    rest /= per_dim_;
  }
  return p;
}

Evaluation GridOracle::evaluate(const Point& x) {
  const double v = f_(x);
  return {v, true, v};
}

GridFunction realize_test_function(const GpParams& params, std::uint64_t seed, std::size_t grid_per_dim) {
  const std::size_t d = params.input_dim();
  if (grid_per_dim == 0) grid_per_dim = default_grid_per_dim(d);
  const ParametricGp gp(params);
  auto rng = stream(seed, 0);
  const Points grid = regular_grid(d, grid_per_dim);
  if (static_cast<std::size_t>(grid.rows()) <= kMaxJointGrid)
    return GridFunction(d, grid_per_dim, joint_sample(gp, grid, rng));

  const auto anchors_per_dim = std::min<std::size_t>(
      grid_per_dim, std::max<std::size_t>(2, static_cast<std::size_t>(std::floor(std::pow(kAnchorBudget, 1.0 / static_cast<double>(d))))));
  const Points anchors = regular_grid(d, anchors_per_dim);
  const Eigen::VectorXd f_anchor = joint_sample(gp, anchors, rng);
  const JitteredCholesky chol(gp.kernel_matrix(anchors, anchors));
  const Eigen::VectorXd alpha = chol.solve(Eigen::VectorXd(f_anchor - gp.mean_vector(anchors)));
  Eigen::VectorXd values(grid.rows());
  constexpr Eigen::Index kChunk = 2048;
  for (Eigen::Index start = 0; start < grid.rows(); start += kChunk) {
    const Eigen::Index len = std::min(kChunk, grid.rows() - start);
    const Points block = grid.middleRows(start, len);
    values.segment(start, len) = gp.mean_vector(block) + gp.kernel_matrix(block, anchors) * alpha;
  }
  return GridFunction(d, grid_per_dim, std::move(values));
}

SynthResult synth_generate(const SynthConfig& config) {
  if (config.n_tasks < 1 || config.points_per_task < 1) throw InputError("synth: need N >= 1 and M >= 1");
  if (!(config.matched_fraction >= 0.0 && config.matched_fraction <= 1.0))
    throw InputError("synth: matched fraction must be in [0, 1]");
  if (!(config.noise_variance >= 0.0)) throw InputError("synth: noise variance must be non-negative");
  const std::size_t d = config.true_params.input_dim();
  const auto m = static_cast<Eigen::Index>(config.points_per_task);
  const auto m_matched =
      static_cast<Eigen::Index>(std::lround(config.matched_fraction * static_cast<double>(config.points_per_task)));
  const ParametricGp gp(config.true_params);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Points matched(m_matched, static_cast<Eigen::Index>(d));
  {
    auto rng = stream(config.seed, kMatchedStream);
    for (Eigen::Index i = 0; i < matched.rows(); ++i)
      for (Eigen::Index j = 0; j < matched.cols(); ++j) matched(i, j) = unit(rng);
  }

  std::vector<std::string> names;
  std::vector<ObservationSet> obs;
  const double noise_sd = std::sqrt(config.noise_variance);
  for (std::size_t t = 0; t < config.n_tasks; ++t) {
    auto rng = stream(config.seed, t);
    Points xs(m, static_cast<Eigen::Index>(d));
    xs.topRows(m_matched) = matched;
    for (Eigen::Index i = m_matched; i < m; ++i)
      for (Eigen::Index j = 0; j < xs.cols(); ++j) xs(i, j) = unit(rng);
    Eigen::VectorXd ys = joint_sample(gp, xs, rng);
    if (noise_sd > 0.0) ys += noise_sd * standard_normals(m, rng);
    names.push_back("task_" + std::to_string(t));
    obs.emplace_back(std::move(xs), std::move(ys));
  }

  SynthResult res{make_dataset(SearchSpace::unit_cube(d), std::move(names), std::move(obs)), {},
                  config.grid_per_dim ? config.grid_per_dim : default_grid_per_dim(d)};
  for (std::size_t i = 0; i < config.n_test_functions; ++i) {
    auto seeder = stream(config.seed, kTestStreamBase + i);
    const std::uint64_t fseed = seeder();
    const GridFunction f = realize_test_function(config.true_params, fseed, res.grid_per_dim);
    res.test_functions.push_back({"test_" + std::to_string(i), fseed, f.max_value()});
  }
  return res;
}

std::string serialize_truth(const SynthConfig& config, const SynthResult& result) {
  auto doc = nlohmann::ordered_json::parse(serialize_params(config.true_params));
  doc["noise_variance"] = config.noise_variance;
  doc["grid_per_dim"] = result.grid_per_dim;
  auto tests = nlohmann::ordered_json::array();
  for (const auto& t : result.test_functions)
    tests.push_back({{"name", t.name}, {"seed", t.seed}, {"max_value", t.max_value}});
  doc["test_functions"] = std::move(tests);
  return doc.dump(2) + "\n";
}

Truth parse_truth(std::string_view text) {
  Truth truth{deserialize_params(text), 0.0, 0, {}};
  try {
    const auto doc = nlohmann::json::parse(text);
    truth.noise_variance = doc.value("noise_variance", 0.0);
    truth.grid_per_dim = doc.value("grid_per_dim", std::size_t{0});
    if (doc.contains("test_functions"))
      for (const auto& t : doc.at("test_functions"))
        truth.test_functions.push_back(
            {t.at("name").get<std::string>(), t.at("seed").get<std::uint64_t>(), t.at("max_value").get<double>()});
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("truth document: ") + e.what());
  }
  return truth;
}

}  // namespace pregp
