#include "pregp/dataset.hpp"

#include <set>

#include "pregp/error.hpp"
#include "pregp/warping.hpp"

namespace pregp {

std::string_view to_string(OutputWarping w) {
  switch (w) {
    case OutputWarping::none: return "none";
    case OutputWarping::neg_log_error: return "neg-log-error";
    case OutputWarping::online_softplus: return "online-softplus";
  }
  return "none";
}

OutputWarping parse_output_warping(std::string_view token) {
  if (token == "none") return OutputWarping::none;
  if (token == "neg-log-error") return OutputWarping::neg_log_error;
  if (token == "online-softplus") return OutputWarping::online_softplus;
  throw ParseError("unknown output warping '" + std::string(token) + "'");
}

const TaskData& MultiTaskDataset::task(std::string_view name) const {
  for (const auto& t : tasks)
    if (t.name == name) return t;
  throw InputError("no task named '" + std::string(name) + "'");
}

void MultiTaskDataset::validate() const {
  if (tasks.empty()) throw ValidationError("dataset has no tasks");
  std::set<std::string> names;
  for (const auto& t : tasks) {
    if (!names.insert(t.name).second) throw ValidationError("duplicate task name '" + t.name + "'");
    if (t.observations.xs.rows() != t.observations.ys.size())
      throw ValidationError("task '" + t.name + "': |xs| != |ys|");
    if (!t.observations.empty() && static_cast<std::size_t>(t.observations.xs.cols()) != dim())
      throw ValidationError("task '" + t.name + "': observations do not match the search space dimension");
  }
}

MultiTaskDataset make_dataset(SearchSpace space, std::vector<std::string> names,
                              std::vector<ObservationSet> observations) {
  if (names.size() != observations.size()) throw InputError("make_dataset: one name per task required");
  MultiTaskDataset ds{std::move(space), OutputWarping::none, {}};
  for (std::size_t i = 0; i < names.size(); ++i) {
    TaskData t{std::move(names[i]), {}, std::move(observations[i])};
    for (Eigen::Index r = 0; r < t.observations.size(); ++r) {
      const Point row = t.observations.xs.row(r).transpose();
      t.raw.push_back({unwarp_input(row, ds.search_space), t.observations.ys(r), true});
    }
    ds.tasks.push_back(std::move(t));
  }
  ds.validate();
  return ds;
}

}  // namespace pregp
