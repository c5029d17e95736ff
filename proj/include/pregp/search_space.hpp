#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pregp {

enum class Scaling { linear, log, one_minus_log };

[[nodiscard]] std::string_view to_string(Scaling s);
/// Throws ParseError on an unknown token.
[[nodiscard]] Scaling parse_scaling(std::string_view token);

struct DimSpec {
  std::string name;
  double low = 0.0;
  double high = 1.0;
  Scaling scaling = Scaling::linear;
};

/// Hyper-rectangular search space. Points handed to the GP live in the
/// warped unit cube [0,1]^d; see warping.hpp.
class SearchSpace {
 public:
  SearchSpace() = default;
  /// Validates every dimension; throws ValidationError.
  explicit SearchSpace(std::vector<DimSpec> dims);

  /// d linear dimensions on [0,1] named x1..xd.
  [[nodiscard]] static SearchSpace unit_cube(std::size_t d);

  [[nodiscard]] std::size_t dim() const noexcept { return dims_.size(); }
  [[nodiscard]] const std::vector<DimSpec>& dims() const noexcept { return dims_; }
  [[nodiscard]] const DimSpec& operator[](std::size_t i) const { return dims_.at(i); }

  friend bool operator==(const SearchSpace& a, const SearchSpace& b);

 private:
  std::vector<DimSpec> dims_;
};

}  // namespace pregp
