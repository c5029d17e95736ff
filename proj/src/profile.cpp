#include "pregp/profile.hpp"

#include <algorithm>
#include <charconv>

#include "pregp/error.hpp"

namespace pregp {

ProfileCriterion parse_criterion(std::string_view token) {
  constexpr std::string_view prefix = "median@";
  if (!token.starts_with(prefix)) throw ParseError("criterion must look like median@K");
  int k = 0;
  const auto rest = token.substr(prefix.size());
  const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), k);
  if (ec != std::errc() || ptr != rest.data() + rest.size() || k < 1)
    throw ParseError("criterion iteration must be a positive integer");
  return {k};
}

double median(std::vector<double> values) {
  if (values.empty()) throw InputError("median of an empty list");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<std::vector<double>> performance_profile(const CurveSet& curves, const ProfileCriterion& criterion) {
  if (curves.empty()) throw InputError("profile needs at least one method");
  const std::size_t n_tasks = curves.front().size();
  if (n_tasks == 0) throw InputError("profile needs at least one task");
  const std::size_t len = curves.front().front().size();
  for (const auto& method : curves) {
    if (method.size() != n_tasks) throw InputError("every method needs a curve for every task");
    for (const auto& c : method)
      if (c.size() != len) throw InputError("all curves must have the same length");
  }
  if (criterion.iter < 1 || static_cast<std::size_t>(criterion.iter) > len)
    throw InputError("criterion iteration is outside the curves");

  std::vector<double> bar(n_tasks);
  for (std::size_t t = 0; t < n_tasks; ++t) {
    std::vector<double> at_k;
    for (const auto& method : curves) at_k.push_back(method[t][static_cast<std::size_t>(criterion.iter) - 1]);
    bar[t] = median(std::move(at_k));
  }
  std::vector<std::vector<double>> out(curves.size(), std::vector<double>(len, 0.0));
  for (std::size_t m = 0; m < curves.size(); ++m)
    for (std::size_t i = 0; i < len; ++i) {
      std::size_t hits = 0;
      for (std::size_t t = 0; t < n_tasks; ++t)
        if (curves[m][t][i] >= bar[t]) ++hits;
      out[m][i] = static_cast<double>(hits) / static_cast<double>(n_tasks);
    }
  return out;
}

}  // namespace pregp
