#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pregp/gp_prior.hpp"
#include "pregp/search_space.hpp"

namespace pregp {

/// One evaluation as stored on disk, in native units.
struct RawTrial {
  std::vector<double> x;
  std::optional<double> y;  ///< may be absent when infeasible
  bool feasible = true;

  friend bool operator==(const RawTrial&, const RawTrial&) = default;
};

/// Transformation from stored y values to the values the GP sees.
enum class OutputWarping {
  none,
  neg_log_error,    ///< r -> -log(r + 1e-10); infeasible trials are dropped
  online_softplus,  ///< per-task softplus squashing into (-2, 2]; infeasible -> -2
};

[[nodiscard]] std::string_view to_string(OutputWarping w);
[[nodiscard]] OutputWarping parse_output_warping(std::string_view token);

struct TaskData {
  std::string name;
  std::vector<RawTrial> raw;    ///< as loaded; kept for lossless saving
  ObservationSet observations;  ///< warped inputs and outputs
};

/// N related tasks sharing one search space.
struct MultiTaskDataset {
  SearchSpace search_space;
  OutputWarping output_warping = OutputWarping::none;
  std::vector<TaskData> tasks;

  [[nodiscard]] std::size_t dim() const noexcept { return search_space.dim(); }
  [[nodiscard]] std::size_t n_tasks() const noexcept { return tasks.size(); }
  /// Throws InputError when no task has this name.
  [[nodiscard]] const TaskData& task(std::string_view name) const;
  /// N >= 1, unique names, dimension-consistent observations. Throws ValidationError.
  void validate() const;
  /// Copy holding only the tasks for which `keep(name)` is true.
  template <typename Pred>
  [[nodiscard]] MultiTaskDataset filter(Pred keep) const {
    MultiTaskDataset out{search_space, output_warping, {}};
    for (const auto& t : tasks)
      if (keep(t.name)) out.tasks.push_back(t);
    return out;
  }
};

/// Builds a dataset from warped observations with output warping `none`;
/// raw trials are recovered by unwarping the inputs.
[[nodiscard]] MultiTaskDataset make_dataset(SearchSpace space, std::vector<std::string> names,
                                            std::vector<ObservationSet> observations);

}  // namespace pregp
