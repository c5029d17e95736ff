#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "pregp/linalg.hpp"
#include "pregp/posterior.hpp"

namespace pregp {

enum class AcquisitionKind { pi, ei, ucb };

/// Score every point of a finite candidate list.
struct CandidateSet {};

/// Uniform samples in the unit cube followed by coordinate-wise refinement of the best one.
struct BoxSearch {
  int n_random = 1000;
  int n_local_steps = 100;
};

struct AcquisitionSpec {
  AcquisitionKind kind = AcquisitionKind::pi;
  double threshold = 0.1;  ///< PI target offset above the best observation
  double zeta = 1.8;       ///< UCB coefficient
  std::variant<CandidateSet, BoxSearch> maximizer = CandidateSet{};
};

/// Parses `pi`, `pi:0.1`, `ei`, `ucb`, `ucb:1.8`. Throws ParseError.
[[nodiscard]] AcquisitionSpec parse_acquisition(std::string_view token);
[[nodiscard]] std::string format_acquisition(const AcquisitionSpec& spec);

/// Stand-in for +-infinity in PI scores at zero predictive deviation.
inline constexpr double kInfiniteScore = 1e300;

/// PI: (mu - (best_y + threshold)) / sigma.  EI: sigma (z Phi(z) + phi(z)), z = (mu - best_y) / sigma.
/// UCB: mu + zeta sigma.  sigma = 0 takes the limiting values.
/// Throws InputError for negative sigma.
[[nodiscard]] double score(const AcquisitionSpec& spec, double mu, double sigma, double best_y);

/// Theoretical GP-UCB coefficient for N training tasks at iteration t with
/// confidence delta. Throws DomainError naming the violated precondition.
[[nodiscard]] double gp_ucb_zeta(int n_tasks, int t, double delta);

struct Choice {
  Point x;
  std::optional<Eigen::Index> index;  ///< row in the candidate list
  double value = 0.0;
};

/// Acquisition values of `x` under `posterior`. With no observations PI and EI
/// are undefined and the prior mean is used as the score.
[[nodiscard]] Eigen::VectorXd acquisition_values(const AcquisitionSpec& spec, const PosteriorGp& posterior,
                                                 const Points& x);

/// Argmax over the candidate rows; ties go to the lowest index. Previously
/// chosen candidates stay eligible. Throws InputError on an empty list.
[[nodiscard]] Choice maximize(const AcquisitionSpec& spec, const PosteriorGp& posterior, const Points& candidates);
/// Argmax over the unit cube using the BoxSearch budget in `spec` (defaults if
/// spec asks for a candidate set). Deterministic in `seed`.
[[nodiscard]] Choice maximize(const AcquisitionSpec& spec, const PosteriorGp& posterior, std::uint64_t seed);

}  // namespace pregp
