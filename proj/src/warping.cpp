#include "pregp/warping.hpp"

#include <algorithm>
#include <cmath>

#include "pregp/error.hpp"

namespace pregp {

namespace {

double forward(double v, Scaling s) {
  switch (s) {
    case Scaling::linear: return v;
    case Scaling::log: return std::log(v);
    case Scaling::one_minus_log: return std::log(1.0 - v);
  }
  return v;
}

double backward(double w, Scaling s) {
  switch (s) {
    case Scaling::linear: return w;
    case Scaling::log: return std::exp(w);
    case Scaling::one_minus_log: return 1.0 - std::exp(w);
  }
  return w;
}

}  // namespace

Point warp_input(std::span<const double> x_raw, const SearchSpace& space) {
  if (x_raw.size() != space.dim()) throw ValidationError("raw point has the wrong dimension");
  Point out(static_cast<Eigen::Index>(space.dim()));
  for (std::size_t i = 0; i < space.dim(); ++i) {
    const DimSpec& d = space[i];
    const double v = x_raw[i];
    if (!(v >= d.low && v <= d.high))
      throw ValidationError("dimension '" + d.name + "': value " + std::to_string(v) + " outside [" +
                            std::to_string(d.low) + ", " + std::to_string(d.high) + "]");
    const double lo = forward(d.low, d.scaling);
    const double hi = forward(d.high, d.scaling);
    const double u = (forward(v, d.scaling) - lo) / (hi - lo);
    out(static_cast<Eigen::Index>(i)) = std::clamp(u, 0.0, 1.0);
  }
  return out;
}

std::vector<double> unwarp_input(const Point& x, const SearchSpace& space) {
  if (static_cast<std::size_t>(x.size()) != space.dim()) throw ValidationError("point has the wrong dimension");
  std::vector<double> out(space.dim());
  for (std::size_t i = 0; i < space.dim(); ++i) {
    const DimSpec& d = space[i];
    const double u = x(static_cast<Eigen::Index>(i));
    if (!(u >= 0.0 && u <= 1.0)) throw ValidationError("dimension '" + d.name + "': warped value outside [0, 1]");
    const double lo = forward(d.low, d.scaling);
    const double hi = forward(d.high, d.scaling);
    out[i] = std::clamp(backward(lo + u * (hi - lo), d.scaling), d.low, d.high);
  }
  return out;
}

double warp_output(double error_rate) {
  if (!(error_rate >= 0.0)) throw ValidationError("error rate must be non-negative");
  return -std::log(error_rate + kErrorRateOffset);
}

double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double lower_median(std::vector<double> values) {
  if (values.empty()) throw InputError("median of an empty list");
  const auto mid = (values.size() - 1) / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  return values[mid];
}

std::vector<double> online_map(std::span<const double> values, const std::vector<bool>& feasible) {
  if (values.size() != feasible.size()) throw InputError("online_map: one flag per value required");
  std::vector<double> ok;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!feasible[i]) continue;
    if (!std::isfinite(values[i])) throw ValidationError("online_map: feasible value is not finite");
    ok.push_back(values[i]);
  }
  if (ok.empty()) throw ValidationError("online_map: no feasible values");
  const double med = lower_median(ok);
  const double top = *std::max_element(ok.begin(), ok.end());
  const double denom = softplus(top - med);
  // softplus underflows to 0 far below the median; keep feasible values off -2
  const double floor = std::nextafter(-2.0, 0.0);
  std::vector<double> out(values.size(), -2.0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!feasible[i]) continue;
    out[i] = std::max(softplus(values[i] - med) / denom * 4.0 - 2.0, floor);
  }
  return out;
}

}  // namespace pregp
