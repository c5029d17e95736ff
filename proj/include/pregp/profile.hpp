#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pregp {

/// `median@K`: the per-task bar is the median over methods of the best value
/// each method reached by iteration K (1-based).
struct ProfileCriterion {
  int iter = 1;
};

/// Parses "median@K". Throws ParseError.
[[nodiscard]] ProfileCriterion parse_criterion(std::string_view token);

/// Best-so-far curves indexed [method][task][iteration], maximization.
using CurveSet = std::vector<std::vector<std::vector<double>>>;

/// fractions[m][t] = share of tasks whose best value at iteration t + 1 is at
/// least that task's criterion bar. Throws InputError on ragged input.
[[nodiscard]] std::vector<std::vector<double>> performance_profile(const CurveSet& curves,
                                                                   const ProfileCriterion& criterion);

[[nodiscard]] double median(std::vector<double> values);

}  // namespace pregp
