#include "pregp/search_space.hpp"

#include <cmath>

#include "pregp/error.hpp"

namespace pregp {

std::string_view to_string(Scaling s) {
  switch (s) {
    case Scaling::linear: return "linear";
    case Scaling::log: return "log";
    case Scaling::one_minus_log: return "one-minus-log";
  }
  return "linear";
}

Scaling parse_scaling(std::string_view token) {
  if (token == "linear") return Scaling::linear;
  if (token == "log") return Scaling::log;
  if (token == "one-minus-log") return Scaling::one_minus_log;
  throw ParseError("unknown scaling '" + std::string(token) + "'");
}

SearchSpace::SearchSpace(std::vector<DimSpec> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw ValidationError("search space needs at least one dimension");
  for (const auto& d : dims_) {
    if (!std::isfinite(d.low) || !std::isfinite(d.high) || !(d.low < d.high))
      throw ValidationError("dimension '" + d.name + "': need finite low < high");
    if (d.scaling == Scaling::log && !(d.low > 0.0))
      throw ValidationError("dimension '" + d.name + "': log scaling needs low > 0");
    if (d.scaling == Scaling::one_minus_log && !(d.high < 1.0))
      throw ValidationError("dimension '" + d.name + "': one-minus-log scaling needs high < 1");
  }
}

SearchSpace SearchSpace::unit_cube(std::size_t d) {
  std::vector<DimSpec> dims;
  for (std::size_t i = 0; i < d; ++i) dims.push_back({"x" + std::to_string(i + 1), 0.0, 1.0, Scaling::linear});
  return SearchSpace(std::move(dims));
}

bool operator==(const SearchSpace& a, const SearchSpace& b) {
  if (a.dims_.size() != b.dims_.size()) return false;
  for (std::size_t i = 0; i < a.dims_.size(); ++i) {
    const auto& x = a.dims_[i];
    const auto& y = b.dims_[i];
    if (x.name != y.name || x.low != y.low || x.high != y.high || x.scaling != y.scaling) return false;
  }
  return true;
}

}  // namespace pregp
