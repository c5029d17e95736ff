#include "pregp/trace_io.hpp"

#include <charconv>
#include <sstream>

#include "pregp/error.hpp"

namespace pregp {

std::string format_real(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_trace_csv(const BoTrace& trace, std::size_t dim) {
  std::string out = "t";
  for (std::size_t j = 1; j <= dim; ++j) out += ",x_" + std::to_string(j);
  out += ",y,acq_value,best_so_far\n";
  const auto best = trace.best_so_far();
  for (std::size_t t = 0; t < trace.size(); ++t) {
    const auto& s = trace.steps[t];
    if (static_cast<std::size_t>(s.x.size()) != dim) throw InputError("trace point has the wrong dimension");
    out += std::to_string(t + 1);
    for (Eigen::Index j = 0; j < s.x.size(); ++j) out += "," + format_real(s.x(j));
    out += "," + format_real(s.y) + "," + format_real(s.acq_value) + "," + format_real(best[t]) + "\n";
  }
  return out;
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

double parse_real(std::string_view cell, std::size_t line_no) {
  const std::string s(cell);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw ParseError("trace line " + std::to_string(line_no) + ": bad number '" + s + "'");
  return v;
}

}  // namespace

std::vector<TraceRow> parse_trace_csv(std::string_view text) {
  std::vector<TraceRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw ParseError("trace: missing header");
  const auto header = split(line);
  if (header.size() < 4 || header.front() != "t" || header.back() != "best_so_far")
    throw ParseError("trace: unexpected header");
  const std::size_t cols = header.size();
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != cols) throw ParseError("trace line " + std::to_string(line_no) + ": wrong column count");
    TraceRow r;
    r.t = static_cast<int>(parse_real(cells[0], line_no));
    for (std::size_t j = 1; j + 3 < cols; ++j) r.x.push_back(parse_real(cells[j], line_no));
    r.y = parse_real(cells[cols - 3], line_no);
    r.acq_value = parse_real(cells[cols - 2], line_no);
    r.best_so_far = parse_real(cells[cols - 1], line_no);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string format_profile_csv(const std::vector<std::string>& methods,
                               const std::vector<std::vector<double>>& fractions) {
  if (methods.size() != fractions.size()) throw InputError("profile: one row of fractions per method");
  std::string out = "method,iter,fraction\n";
  for (std::size_t m = 0; m < methods.size(); ++m)
    for (std::size_t t = 0; t < fractions[m].size(); ++t)
      out += methods[m] + "," + std::to_string(t + 1) + "," + format_real(fractions[m][t]) + "\n";
  return out;
}

}  // namespace pregp
