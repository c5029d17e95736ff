#pragma once

#include <span>
#include <vector>

#include "pregp/linalg.hpp"
#include "pregp/search_space.hpp"

namespace pregp {

/// Native units -> unit cube. Log dims use ln x, one-minus-log dims ln(1 - x),
/// then each warped dim is rescaled affinely onto [0, 1].
/// Throws ValidationError for values outside [low, high].
[[nodiscard]] Point warp_input(std::span<const double> x_raw, const SearchSpace& space);
/// Exact inverse of warp_input. Throws ValidationError outside [0, 1].
[[nodiscard]] std::vector<double> unwarp_input(const Point& x, const SearchSpace& space);

/// Offset inside the log of warp_output.
inline constexpr double kErrorRateOffset = 1e-10;

/// r -> -ln(r + 1e-10). Strictly decreasing; throws ValidationError for r < 0.
[[nodiscard]] double warp_output(double error_rate);

/// Per-task softplus squashing of feasible values:
///   y -> softplus(y - median) / softplus(y_max - median) * 4 - 2,
/// with the lower median on even counts. Infeasible entries map to exactly -2,
/// feasible entries land in (-2, 2] and y_max maps to 2.
/// `values[i]` is ignored when `feasible[i]` is false.
/// Throws ValidationError when nothing is feasible.
[[nodiscard]] std::vector<double> online_map(std::span<const double> values, const std::vector<bool>& feasible);

[[nodiscard]] double softplus(double z);
[[nodiscard]] double lower_median(std::vector<double> values);

}  // namespace pregp
