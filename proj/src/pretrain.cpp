#include "pregp/pretrain.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "pregp/error.hpp"
#include "pregp/matching.hpp"

namespace pregp {

namespace {

constexpr int kMaxReseeds = 10;

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

MatchingMoments subsample(const MatchingMoments& m, const std::vector<Eigen::Index>& rows) {
  MatchingMoments out;
  const auto k = static_cast<Eigen::Index>(rows.size());
  out.inputs.resize(k, m.inputs.cols());
  out.y.resize(k, m.y.cols());
  out.mu_tilde.resize(k);
  out.k_tilde.resize(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    out.inputs.row(i) = m.inputs.row(rows[i]);
    out.y.row(i) = m.y.row(rows[i]);
    out.mu_tilde(i) = m.mu_tilde(rows[i]);
    for (Eigen::Index j = 0; j < k; ++j) out.k_tilde(i, j) = m.k_tilde(rows[i], rows[j]);
  }
  return out;
}

std::vector<Eigen::Index> sample_rows(Eigen::Index n, std::size_t b, std::mt19937_64& rng) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  if (b >= idx.size()) return idx;
  for (std::size_t i = 0; i < b; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(b);
  return idx;
}

MultiTaskDataset subsample(const MultiTaskDataset& ds, std::size_t b, std::mt19937_64& rng) {
  MultiTaskDataset out{ds.search_space, ds.output_warping, {}};
  for (const auto& t : ds.tasks) {
    const auto rows = sample_rows(t.observations.size(), b, rng);
    Points xs(static_cast<Eigen::Index>(rows.size()), t.observations.xs.cols());
    Eigen::VectorXd ys(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      xs.row(static_cast<Eigen::Index>(i)) = t.observations.xs.row(rows[i]);
      ys(static_cast<Eigen::Index>(i)) = t.observations.ys(rows[i]);
    }
    out.tasks.push_back({t.name, {}, ObservationSet(std::move(xs), std::move(ys))});
  }
  return out;
}

ValueAndGradient evaluate(const GpParams& params, const MultiTaskDataset& dataset, const MatchingMoments* moments,
                          const TrainConfig& config, bool with_gradient) {
  const EvalOptions eval{config.threads};
  ValueAndGradient out;
  switch (config.objective) {
    case ObjectiveKind::nll:
      if (with_gradient) return nll_value_and_gradient(params, dataset, eval);
      out.value = nll_objective(params, dataset, eval);
      return out;
    case ObjectiveKind::kl:
      if (with_gradient) return kl_value_and_gradient(params, *moments);
      out.value = kl_objective(params, *moments);
      return out;
    case ObjectiveKind::nll_plus_kl:
      if (with_gradient) return combined_value_and_gradient(params, dataset, *moments, config.lambda, eval);
      out.value = combined_objective(params, dataset, *moments, config.lambda, eval);
      return out;
  }
  return out;
}

}  // namespace

std::string_view to_string(ObjectiveKind k) {
  switch (k) {
    case ObjectiveKind::nll: return "nll";
    case ObjectiveKind::kl: return "kl";
    case ObjectiveKind::nll_plus_kl: return "nllkl";
  }
  return "nll";
}

ObjectiveKind parse_objective(std::string_view token) {
  if (token == "nll") return ObjectiveKind::nll;
  if (token == "kl") return ObjectiveKind::kl;
  if (token == "nllkl" || token == "nll_plus_kl") return ObjectiveKind::nll_plus_kl;
  throw ParseError("unknown objective '" + std::string(token) + "'");
}

GpParams initial_params(ModelArchitecture arch, const MultiTaskDataset& dataset, std::uint64_t seed) {
  const ParamLayout lay(arch.variant, dataset.dim());
  auto rng = make_rng(seed, 0x1417);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::VectorXd flat = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(lay.size));
  if (arch.variant == Architecture::mlp_matern) {
    const double in_scale = 1.0 / std::sqrt(static_cast<double>(lay.input_dim));
    const double hid_scale = 1.0 / std::sqrt(static_cast<double>(kHiddenWidth));
    for (std::size_t i = 0; i < lay.feature_weights_size; ++i) flat(lay.feature_weights + i) = in_scale * unit(rng);
    for (std::size_t i = 0; i < lay.feature_bias_size; ++i) flat(lay.feature_bias + i) = in_scale * unit(rng);
    for (std::size_t i = 0; i < lay.mean_weights_size; ++i) flat(lay.mean_weights + i) = hid_scale * unit(rng);
  }
  double sum = 0.0;
  Eigen::Index count = 0;
  for (const auto& t : dataset.tasks) {
    sum += t.observations.ys.sum();
    count += t.observations.size();
  }
  flat(lay.mean_offset) = count ? sum / static_cast<double>(count) : 0.0;
  flat(lay.log_amplitude) = unit(rng);
  for (std::size_t i = 0; i < lay.kernel_dim; ++i) flat(lay.log_lengthscales + i) = unit(rng);
  flat(lay.log_noise) = -3.0 + unit(rng);
  return GpParams(arch, lay.input_dim, std::move(flat));
}

ValueAndGradient training_objective(const GpParams& params, const MultiTaskDataset& dataset,
                                    const MatchingMoments* moments, const TrainConfig& config, bool with_gradient) {
  if (config.objective != ObjectiveKind::nll && moments == nullptr)
    throw InputError("KL objectives need matching moments");
  if (!with_gradient || config.gradient_mode == GradientMode::analytic)
    return evaluate(params, dataset, moments, config, with_gradient);
  ValueAndGradient out = evaluate(params, dataset, moments, config, false);
  out.gradient = finite_difference_gradient(
      [&](const Eigen::VectorXd& theta) { return evaluate(params.with_flat(theta), dataset, moments, config, false).value; },
      params.pack());
  return out;
}

PretrainResult pretrain_from(const MultiTaskDataset& dataset, const GpParams& init, const TrainConfig& config,
                             const MatchingMoments* moments, const IterationCallback& log) {
  dataset.validate();
  if (config.max_iters < 0) throw InputError("max_iters must be non-negative");
  if (!(config.lambda >= 0.0)) throw InputError("lambda must be non-negative");
  std::optional<MatchingMoments> extracted;
  if (config.objective != ObjectiveKind::nll && moments == nullptr) {
    extracted = extract_matching(dataset);
    moments = &*extracted;
  }
  for (const auto& t : dataset.tasks)
    if (t.observations.empty()) throw InputError("task '" + t.name + "' has no observations");

  auto full = [&](const Eigen::VectorXd& theta, Eigen::VectorXd& grad) {
    auto vg = training_objective(init.with_flat(theta), dataset, moments, config, true);
    grad = std::move(vg.gradient);
    return vg.value;
  };

  PretrainResult res{init, init, 0.0, 0.0, 0};
  res.initial_objective = training_objective(init, dataset, moments, config, false).value;
  if (!std::isfinite(res.initial_objective)) throw EvaluationError("objective is not finite at initialization", 0);
  res.final_objective = res.initial_objective;
  if (config.max_iters == 0) return res;

  MinimizeResult min;
  if (!config.batch_size) {
    LbfgsOptions opts;
    opts.max_iters = config.max_iters;
    opts.relative_tolerance = config.convergence_tol;
    min = minimize_lbfgs(full, init.pack(), opts, log);
  } else {
    const std::size_t b = *config.batch_size;
    if (b == 0) throw InputError("batch size must be positive");
    Eigen::Index largest = 0;
    for (const auto& t : dataset.tasks) largest = std::max(largest, t.observations.size());
    if (b > static_cast<std::size_t>(largest)) throw InputError("batch size exceeds the largest task");
    auto rng = make_rng(config.seed, 0xba7c);
    auto stochastic = [&](const Eigen::VectorXd& theta, Eigen::VectorXd& grad, int) {
      const MultiTaskDataset batch = subsample(dataset, b, rng);
      std::optional<MatchingMoments> batch_moments;
      if (moments) batch_moments = subsample(*moments, sample_rows(moments->n_points(), b, rng));
      TrainConfig cfg = config;
      auto vg = training_objective(init.with_flat(theta), batch, batch_moments ? &*batch_moments : nullptr, cfg, true);
      grad = std::move(vg.gradient);
      return vg.value;
    };
    auto value = [&](const Eigen::VectorXd& theta) {
      return training_objective(init.with_flat(theta), dataset, moments, config, false).value;
    };
    StochasticOptions opts;
    opts.max_iters = config.max_iters;
    min = minimize_stochastic(stochastic, value, init.pack(), opts, log);
  }
  if (min.value <= res.initial_objective) {
    res.params = init.with_flat(min.theta);
    res.final_objective = min.value;
  }
  res.iterations = min.iterations;
  return res;
}

PretrainResult pretrain(const MultiTaskDataset& dataset, ModelArchitecture arch, const TrainConfig& config,
                        const MatchingMoments* moments, const IterationCallback& log) {
  dataset.validate();
  std::optional<MatchingMoments> extracted;
  if (config.objective != ObjectiveKind::nll && moments == nullptr) {
    extracted = extract_matching(dataset);
    moments = &*extracted;
  }
  for (int attempt = 0; attempt < kMaxReseeds; ++attempt) {
    const GpParams init = initial_params(arch, dataset, config.seed + static_cast<std::uint64_t>(attempt) * 0x9e3779b9ULL);
    double v;
    try {
      v = training_objective(init, dataset, moments, config, false).value;
    } catch (const NumericalError&) {
      continue;
    }
    if (!std::isfinite(v)) continue;
    return pretrain_from(dataset, init, config, moments, log);
  }
  throw InitializationError("objective could not be evaluated at " + std::to_string(kMaxReseeds) +
                            " seeded initializations");
}

}  // namespace pregp
