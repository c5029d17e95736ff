#include "pregp/bo.hpp"

#include <random>

#include "pregp/dataset.hpp"
#include "pregp/posterior.hpp"
#include "pregp/pretrain.hpp"

namespace pregp {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t step_seed(std::uint64_t seed, int t) { return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(t))); }

ObservationSet observations(const BoTrace& trace, std::size_t d) {
  Points xs(static_cast<Eigen::Index>(trace.steps.size()), static_cast<Eigen::Index>(d));
  Eigen::VectorXd ys(static_cast<Eigen::Index>(trace.steps.size()));
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    xs.row(static_cast<Eigen::Index>(i)) = trace.steps[i].x.transpose();
    ys(static_cast<Eigen::Index>(i)) = trace.steps[i].y;
  }
  return ObservationSet(std::move(xs), std::move(ys));
}

Evaluation observe(Oracle& oracle, const Choice& c) {
  if (c.index && oracle.candidates()) return oracle.evaluate_index(*c.index);
  return oracle.evaluate(c.x);
}

bool use_table(const AcquisitionSpec& spec, const Oracle& oracle) {
  return oracle.candidates() != nullptr && std::holds_alternative<CandidateSet>(spec.maximizer);
}

void finalize(BoTrace& trace, const Oracle& oracle) {
  if (trace.steps.empty()) return;
  std::size_t best = 0;
  const auto fmax = oracle.max_value();
  for (std::size_t t = 0; t < trace.steps.size(); ++t) {
    if (trace.steps[t].y > trace.steps[best].y) best = t;
    if (fmax) {
      const auto& s = trace.steps[best];
      trace.regret_trace.push_back(*fmax - s.true_value.value_or(s.y));
    }
  }
  trace.recommendation = best;
}

Choice uniform_choice(Oracle& oracle, std::mt19937_64& rng) {
  if (const Points* table = oracle.candidates()) {
    std::uniform_int_distribution<Eigen::Index> pick(0, table->rows() - 1);
    const Eigen::Index i = pick(rng);
    return {table->row(i).transpose(), i, 0.0};
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Point x(static_cast<Eigen::Index>(oracle.dim()));
  for (Eigen::Index j = 0; j < x.size(); ++j) x(j) = unit(rng);
  return {x, std::nullopt, 0.0};
}

void push(BoTrace& trace, const Choice& c, const Evaluation& e) {
  trace.steps.push_back({c.x, e.y, c.value, e.feasible, e.true_value});
}

}  // namespace

std::vector<double> BoTrace::best_so_far() const {
  std::vector<double> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(out.empty() ? s.y : std::max(out.back(), s.y));
  return out;
}

const BoStep& BoTrace::recommended() const {
  if (!recommendation) throw InputError("trace has no recommendation");
  return steps.at(*recommendation);
}

BoTrace run_bo(std::shared_ptr<const GpPrior> prior, Oracle& oracle, const AcquisitionSpec& spec, int T,
               std::uint64_t seed, std::string method_tag) {
  if (T < 0) throw InputError("iteration budget must be non-negative");
  if (prior->input_dim() != oracle.dim()) throw InputError("model and objective have different dimensions");
  BoTrace trace;
  trace.seed = seed;
  trace.method_tag = std::move(method_tag);
  const bool table = use_table(spec, oracle);
  for (int t = 1; t <= T; ++t) {
    const PosteriorGp posterior(prior, observations(trace, oracle.dim()));
    const Choice c = table ? maximize(spec, posterior, *oracle.candidates())
                           : maximize(spec, posterior, step_seed(seed, t));
    push(trace, c, observe(oracle, c));
  }
  finalize(trace, oracle);
  return trace;
}

BoTrace run_bo(const GpParams& params, Oracle& oracle, const AcquisitionSpec& spec, int T, std::uint64_t seed,
               std::string method_tag) {
  return run_bo(std::make_shared<ParametricGp>(params), oracle, spec, T, seed, std::move(method_tag));
}

BoTrace run_stbo(ModelArchitecture arch, Oracle& oracle, const AcquisitionSpec& spec, int T, std::uint64_t seed,
                 const StboOptions& opts) {
  if (T < 0) throw InputError("iteration budget must be non-negative");
  BoTrace trace;
  trace.seed = seed;
  trace.method_tag = "stbo";
  const std::size_t d = oracle.dim();
  const bool table = use_table(spec, oracle);
  std::mt19937_64 rng(seed);
  std::optional<GpParams> params;
  TrainConfig cfg;
  cfg.objective = ObjectiveKind::nll;
  cfg.max_iters = opts.refit_iters;
  cfg.seed = seed;
  for (int t = 1; t <= T; ++t) {
    Choice c;
    if (t == 1) {
      c = uniform_choice(oracle, rng);
    } else {
      const PosteriorGp posterior(std::make_shared<ParametricGp>(*params), observations(trace, d));
      c = table ? maximize(spec, posterior, *oracle.candidates()) : maximize(spec, posterior, step_seed(seed, t));
    }
    push(trace, c, observe(oracle, c));
    if (t == T) break;
    // refit on the t observations gathered so far
    const MultiTaskDataset single =
        make_dataset(SearchSpace::unit_cube(d), {"task"}, {observations(trace, d)});
    if (!params) params = initial_params(arch, single, seed);
    try {
      params = pretrain_from(single, *params, cfg).params;
    } catch (const Error& e) {
      trace.events.push_back("iteration " + std::to_string(t) + ": refit failed, keeping previous parameters: " +
                             e.what());
    }
    trace.refit_sizes.push_back(static_cast<std::size_t>(t));
  }
  finalize(trace, oracle);
  return trace;
}

BoTrace run_random(Oracle& oracle, int T, std::uint64_t seed) {
  if (T < 0) throw InputError("iteration budget must be non-negative");
  BoTrace trace;
  trace.seed = seed;
  trace.method_tag = "rand";
  std::mt19937_64 rng(seed);
  for (int t = 1; t <= T; ++t) {
    const Choice c = uniform_choice(oracle, rng);
    push(trace, c, observe(oracle, c));
  }
  finalize(trace, oracle);
  return trace;
}

double simple_regret(const BoTrace& trace, double f_max) {
  if (trace.steps.empty()) throw InputError("simple regret of an empty trace");
  std::size_t best = 0;
  for (std::size_t t = 1; t < trace.steps.size(); ++t)
    if (trace.steps[t].y > trace.steps[best].y) best = t;
  const auto& s = trace.steps[best];
  return f_max - s.true_value.value_or(s.y);
}

}  // namespace pregp
