#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pregp/dataset.hpp"
#include "pregp/gp_params.hpp"
#include "pregp/oracle.hpp"

namespace pregp {

/// Hierarchical generator: fixed GP parameters, then independent function
/// draws per task.
struct SynthConfig {
  std::size_t n_tasks = 1;
  std::size_t points_per_task = 1;
  GpParams true_params;  ///< its input dimension is the dataset dimension
  /// Variance of the i.i.d. observation noise added to training observations.
  double noise_variance = 0.0;
  /// round(matched_fraction * M) inputs are shared by every task.
  double matched_fraction = 0.0;
  std::uint64_t seed = 0;
  std::size_t n_test_functions = 0;
  std::size_t grid_per_dim = 0;  ///< 0 picks 200 for d <= 2, floor(40000^(1/d)) otherwise
};

/// A function realized on a regular grid over the unit cube; evaluation
/// snaps to the nearest grid point, so max_value() is exact.
class GridFunction {
 public:
  GridFunction(std::size_t dim, std::size_t per_dim, Eigen::VectorXd values);

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] std::size_t per_dim() const noexcept { return per_dim_; }
  [[nodiscard]] const Eigen::VectorXd& values() const noexcept { return values_; }
  [[nodiscard]] double max_value() const noexcept { return values_.maxCoeff(); }
  [[nodiscard]] double operator()(const Point& x) const;
  [[nodiscard]] Point grid_point(Eigen::Index flat_index) const;

 private:
  std::size_t dim_;
  std::size_t per_dim_;
  Eigen::VectorXd values_;
};

/// Noiseless oracle over a GridFunction.
class GridOracle final : public Oracle {
 public:
  explicit GridOracle(GridFunction f) : f_(std::move(f)) {}
  [[nodiscard]] std::size_t dim() const override { return f_.dim(); }
  Evaluation evaluate(const Point& x) override;
  [[nodiscard]] std::optional<double> max_value() const override { return f_.max_value(); }
  [[nodiscard]] const GridFunction& function() const noexcept { return f_; }

 private:
  GridFunction f_;
};

struct TestFunctionInfo {
  std::string name;
  std::uint64_t seed = 0;
  double max_value = 0.0;
};

struct SynthResult {
  MultiTaskDataset dataset;
  std::vector<TestFunctionInfo> test_functions;
  std::size_t grid_per_dim = 0;
};

[[nodiscard]] std::size_t default_grid_per_dim(std::size_t dim);

/// One latent draw from GP(true mean, true kernel) realized on the grid.
/// Small grids are sampled jointly; larger ones are sampled jointly on a
/// coarser anchor grid and filled in with the conditional mean.
[[nodiscard]] GridFunction realize_test_function(const GpParams& params, std::uint64_t seed, std::size_t grid_per_dim);

/// Deterministic in `config.seed`; task i draws from its own stream.
[[nodiscard]] SynthResult synth_generate(const SynthConfig& config);

/// Truth document: the model document of the true parameters plus
/// `noise_variance`, `grid_per_dim` and `test_functions: [{name, seed, max_value}]`.
[[nodiscard]] std::string serialize_truth(const SynthConfig& config, const SynthResult& result);
struct Truth {
  GpParams params;
  double noise_variance = 0.0;
  std::size_t grid_per_dim = 0;
  std::vector<TestFunctionInfo> test_functions;
};
[[nodiscard]] Truth parse_truth(std::string_view text);

}  // namespace pregp
