#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pregp/acquisition.hpp"
#include "pregp/gp_params.hpp"
#include "pregp/gp_prior.hpp"
#include "pregp/oracle.hpp"

namespace pregp {

struct BoStep {
  Point x;
  double y = 0.0;
  double acq_value = 0.0;
  bool feasible = true;
  std::optional<double> true_value;
};

/// Record of one optimization run.
struct BoTrace {
  std::vector<BoStep> steps;
  /// tau = argmax_t y_t (earliest on ties); empty when no steps were taken.
  std::optional<std::size_t> recommendation;
  /// f_max - f(x_hat_t) after every step, when the oracle knows f_max.
  std::vector<double> regret_trace;
  /// Observations used by each refit (single-task baseline only).
  std::vector<std::size_t> refit_sizes;
  /// Non-fatal events such as failed refits.
  std::vector<std::string> events;
  std::uint64_t seed = 0;
  std::string method_tag;

  [[nodiscard]] std::size_t size() const noexcept { return steps.size(); }
  /// max_{s <= t} y_s for every t.
  [[nodiscard]] std::vector<double> best_so_far() const;
  /// Throws InputError when the trace is empty.
  [[nodiscard]] const BoStep& recommended() const;
};

/// Runs T iterations with a frozen prior: condition on the data so far,
/// maximize the acquisition (over the oracle's table when it has one and the
/// spec asks for a candidate set, otherwise over the unit cube) and observe.
/// The first query maximizes the acquisition under the prior itself.
[[nodiscard]] BoTrace run_bo(std::shared_ptr<const GpPrior> prior, Oracle& oracle, const AcquisitionSpec& spec, int T,
                             std::uint64_t seed, std::string method_tag = "hyperbo");
[[nodiscard]] BoTrace run_bo(const GpParams& params, Oracle& oracle, const AcquisitionSpec& spec, int T,
                             std::uint64_t seed, std::string method_tag = "hyperbo");

struct StboOptions {
  int refit_iters = 50;
};

/// Single-task baseline: the first point is a seeded uniform draw, and the GP
/// is re-fitted by maximum marginal likelihood on the task's own data after
/// every observation. A failed refit keeps the previous parameters and is
/// recorded in `events`.
[[nodiscard]] BoTrace run_stbo(ModelArchitecture arch, Oracle& oracle, const AcquisitionSpec& spec, int T,
                               std::uint64_t seed, const StboOptions& opts = {});

/// Uniform sampling with replacement over the table, or over the unit cube.
[[nodiscard]] BoTrace run_random(Oracle& oracle, int T, std::uint64_t seed);

/// f_max - f(x_hat), using the noiseless value at x_hat when known.
/// Throws InputError on an empty trace.
[[nodiscard]] double simple_regret(const BoTrace& trace, double f_max);

}  // namespace pregp
