#pragma once

#include "pregp/dataset.hpp"
#include "pregp/moments.hpp"

namespace pregp {

/// Inputs closer than this (max-norm, warped coordinates) are the same input.
inline constexpr double kMatchingTolerance = 1e-9;

/// Collects the inputs of the first task that every task observed, builds the
/// M x N observation matrix and its sample moments.
/// Throws InputError when N < 2 and NoMatchingDataError when M = 0.
[[nodiscard]] MatchingMoments extract_matching(const MultiTaskDataset& dataset, double tol = kMatchingTolerance,
                                               bool unbiased = false);

}  // namespace pregp
