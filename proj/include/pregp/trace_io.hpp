#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pregp/bo.hpp"

namespace pregp {

/// One parsed trace row.
struct TraceRow {
  int t = 0;
  std::vector<double> x;
  double y = 0.0;
  double acq_value = 0.0;
  double best_so_far = 0.0;
};

/// `t,x_1..x_d,y,acq_value,best_so_far` with a header line; reals use the shortest round-trip form.
[[nodiscard]] std::string format_trace_csv(const BoTrace& trace, std::size_t dim);
/// Throws ParseError on a malformed table.
[[nodiscard]] std::vector<TraceRow> parse_trace_csv(std::string_view text);

/// `method,iter,fraction` rows, iterations 1-based.
[[nodiscard]] std::string format_profile_csv(const std::vector<std::string>& methods,
                                             const std::vector<std::vector<double>>& fractions);

/// Shortest text that parses back to the same double.
[[nodiscard]] std::string format_real(double v);

}  // namespace pregp
