#pragma once

#include <functional>
#include <optional>

#include "pregp/error.hpp"
#include "pregp/linalg.hpp"

namespace pregp {

/// The oracle could not produce a value and has no notion of infeasibility.
class OracleError : public Error {
 public:
  using Error::Error;
};

/// Value mapped to infeasible evaluations.
inline constexpr double kInfeasibleValue = -2.0;

struct Evaluation {
  double y = 0.0;
  bool feasible = true;
  std::optional<double> true_value;  ///< noiseless f(x) when the oracle knows it
};

/// Black-box objective, maximized. Inputs are warped unit-cube points.
class Oracle {
 public:
  virtual ~Oracle() = default;
  [[nodiscard]] virtual std::size_t dim() const = 0;
  virtual Evaluation evaluate(const Point& x) = 0;
  /// Finite domain, when the oracle is a lookup table.
  [[nodiscard]] virtual const Points* candidates() const { return nullptr; }
  /// Evaluates candidate row `index`; only meaningful when candidates() is set.
  virtual Evaluation evaluate_index(Eigen::Index index) { return evaluate(candidates()->row(index).transpose()); }
  /// max f over the domain, when known.
  [[nodiscard]] virtual std::optional<double> max_value() const { return std::nullopt; }
};

/// Offline table of (x, y) rows treated as noiseless lookups.
class TableOracle final : public Oracle {
 public:
  /// Throws InputError on an empty or inconsistent table.
  TableOracle(Points xs, Eigen::VectorXd ys);

  [[nodiscard]] std::size_t dim() const override { return static_cast<std::size_t>(xs_.cols()); }
  /// Looks up the nearest row.
  Evaluation evaluate(const Point& x) override;
  [[nodiscard]] const Points* candidates() const override { return &xs_; }
  Evaluation evaluate_index(Eigen::Index index) override;
  [[nodiscard]] std::optional<double> max_value() const override { return ys_.maxCoeff(); }
  [[nodiscard]] const Eigen::VectorXd& values() const noexcept { return ys_; }

 private:
  Points xs_;
  Eigen::VectorXd ys_;
};

/// Wraps a callable. Returning nullopt marks the point infeasible; it then
/// enters the trace with value -2.
class FunctionOracle final : public Oracle {
 public:
  using Fn = std::function<std::optional<double>(const Point&)>;
  FunctionOracle(std::size_t dim, Fn fn, std::optional<double> max_value = std::nullopt)
      : dim_(dim), fn_(std::move(fn)), max_(max_value) {}

  [[nodiscard]] std::size_t dim() const override { return dim_; }
  Evaluation evaluate(const Point& x) override;
  [[nodiscard]] std::optional<double> max_value() const override { return max_; }

 private:
  std::size_t dim_;
  Fn fn_;
  std::optional<double> max_;
};

}  // namespace pregp
