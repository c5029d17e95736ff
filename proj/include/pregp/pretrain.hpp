#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "pregp/dataset.hpp"
#include "pregp/gp_params.hpp"
#include "pregp/gradient.hpp"
#include "pregp/moments.hpp"
#include "pregp/objectives.hpp"
#include "pregp/optimizer.hpp"

namespace pregp {

enum class ObjectiveKind { nll, kl, nll_plus_kl };

[[nodiscard]] std::string_view to_string(ObjectiveKind k);
/// Accepts "nll", "kl", "nllkl".
[[nodiscard]] ObjectiveKind parse_objective(std::string_view token);

struct TrainConfig {
  ObjectiveKind objective = ObjectiveKind::nll;
  double lambda = 10.0;
  int max_iters = 200;
  /// Points sampled per task per step; nullopt means full batch.
  std::optional<std::size_t> batch_size;
  std::uint64_t seed = 0;
  GradientMode gradient_mode = GradientMode::analytic;
  double convergence_tol = 1e-8;
  std::size_t threads = 1;
};

struct PretrainResult {
  GpParams params;
  GpParams initial_params;
  double initial_objective = 0.0;
  double final_objective = 0.0;
  int iterations = 0;
};

/// Seeded starting point: log-amplitude and log-lengthscales ~ U(-1, 1), MLP
/// weights ~ U(+-1/sqrt(fan-in)), constant mean = mean of every y,
/// log-noise ~ U(-4, -2).
[[nodiscard]] GpParams initial_params(ModelArchitecture arch, const MultiTaskDataset& dataset, std::uint64_t seed);

/// Value (and gradient) of the configured objective on the full data.
[[nodiscard]] ValueAndGradient training_objective(const GpParams& params, const MultiTaskDataset& dataset,
                                                  const MatchingMoments* moments, const TrainConfig& config,
                                                  bool with_gradient);

/// Fits the GP to the multi-task data. The returned objective never exceeds
/// the value at the seeded initialization, and the run is deterministic in
/// `config.seed`. KL objectives need `moments`; when it is null they are
/// extracted from `dataset` (NoMatchingDataError when none exist).
/// Throws InitializationError when 10 reseeded starting points all fail.
[[nodiscard]] PretrainResult pretrain(const MultiTaskDataset& dataset, ModelArchitecture arch,
                                      const TrainConfig& config, const MatchingMoments* moments = nullptr,
                                      const IterationCallback& log = {});

/// Same as above, starting from `init` instead of a seeded draw.
[[nodiscard]] PretrainResult pretrain_from(const MultiTaskDataset& dataset, const GpParams& init,
                                           const TrainConfig& config, const MatchingMoments* moments = nullptr,
                                           const IterationCallback& log = {});

}  // namespace pregp
