// pregp: pre-train GP priors on multi-task data and run Bayesian optimization
// with them.
//
//   pregp synth    --tasks N --points M --dim d --out DIR
//   pregp pretrain --data dataset.json --objective nll --out DIR
//   pregp run      --model model.json --task dataset.json --mode offline --out DIR
//   pregp bench    --data dataset.json --holdout NAME --methods rand,hyperbo-nll --out-dir DIR
//   pregp report   --traces-dir DIR/traces --criterion median@10 --out DIR

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <regex>
#include <set>
#include <sstream>

#include "parallel.hpp"
#include "pregp/bo.hpp"
#include "pregp/dataset_io.hpp"
#include "pregp/error.hpp"
#include "pregp/manifest.hpp"
#include "pregp/matching.hpp"
#include "pregp/oracle.hpp"
#include "pregp/pretrain.hpp"
#include "pregp/profile.hpp"
#include "pregp/synth.hpp"
#include "pregp/trace_io.hpp"

namespace fs = std::filesystem;
using namespace pregp;

namespace {

constexpr int kUsageExit = 2;

class UsageError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] int exit_code() const noexcept override { return kUsageExit; }
};

std::string str(double v) { return format_real(v); }

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create directory '" + dir.string() + "': " + ec.message());
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t k) {
  std::uint64_t x = seed ^ (k + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// ---- pretrain ---------------------------------------------------------------

struct PretrainArgs {
  std::string data;
  std::string objective = "nll";
  double lambda = 10.0;
  std::string arch = "const-matern";
  int iters = 200;
  std::size_t batch = 0;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::string out;
};

TrainConfig train_config(const PretrainArgs& a) {
  TrainConfig cfg;
  cfg.objective = parse_objective(a.objective);
  cfg.lambda = a.lambda;
  cfg.max_iters = a.iters;
  if (a.batch > 0) cfg.batch_size = a.batch;
  cfg.seed = a.seed;
  cfg.threads = a.threads;
  return cfg;
}

std::map<std::string, std::string> pretrain_snapshot(const PretrainArgs& a) {
  return {{"objective", a.objective}, {"lambda", str(a.lambda)},       {"arch", a.arch},
          {"iters", std::to_string(a.iters)}, {"batch", a.batch ? std::to_string(a.batch) : "full"},
          {"threads", std::to_string(a.threads)}};
}

// Trains on `ds` and writes model.json, train_log.csv and manifest.json into `out`.
PretrainResult pretrain_into(const MultiTaskDataset& ds, const PretrainArgs& a, const fs::path& out,
                             const std::string& command, const std::map<std::string, std::string>& inputs) {
  ensure_dir(out);
  const TrainConfig cfg = train_config(a);
  std::ostringstream log;
  log << "iter,objective,grad_norm,wall_ms\n";
  const PretrainResult res = pretrain(ds, ModelArchitecture{parse_architecture(a.arch)}, cfg, nullptr,
                                      [&](const IterationRecord& r) {
                                        log << r.iter << ',' << str(r.objective) << ',' << str(r.grad_norm) << ','
                                            << str(r.wall_ms) << '\n';
                                      });
  save_params(res.params, (out / "model.json").string());
  write_file((out / "train_log.csv").string(), log.str());

  RunManifest m;
  m.command = command;
  m.config = pretrain_snapshot(a);
  m.config["initial_objective"] = str(res.initial_objective);
  m.config["final_objective"] = str(res.final_objective);
  m.seeds = {a.seed};
  m.inputs = inputs;
  m.outputs = {(out / "model.json").string(), (out / "train_log.csv").string()};
  for (const auto& t : ds.tasks) m.tasks.push_back(t.name);
  write_manifest(m, out / "manifest.json");
  return res;
}

int cmd_pretrain(const PretrainArgs& a) {
  const auto ds = load_dataset(a.data);
  const auto res = pretrain_into(ds, a, a.out, "pretrain", {{a.data, hash_file(a.data)}});
  std::cout << "initial_objective=" << str(res.initial_objective) << "\n"
            << "final_objective=" << str(res.final_objective) << "\n"
            << "iterations=" << res.iterations << "\n";
  return 0;
}

// ---- run --------------------------------------------------------------------

struct RunArgs {
  std::string model;
  std::string task;
  std::string task_name;
  std::string mode = "offline";
  std::string acq = "pi:0.1";
  int iters = 10;
  std::uint64_t seed = 0;
  std::string out;
};

TableOracle table_oracle(const TaskData& task) {
  return TableOracle(task.observations.xs, task.observations.ys);
}

int cmd_run(const RunArgs& a) {
  const GpParams params = load_params(a.model);
  AcquisitionSpec spec = parse_acquisition(a.acq);
  std::unique_ptr<Oracle> oracle;
  std::string chosen;
  if (a.mode == "offline") {
    const auto ds = load_dataset(a.task);
    const TaskData& task = a.task_name.empty() ? ds.tasks.front() : ds.task(a.task_name);
    chosen = task.name;
    oracle = std::make_unique<TableOracle>(table_oracle(task));
  } else if (a.mode == "online-synth") {
    const Truth truth = parse_truth(read_file(a.task));
    if (truth.test_functions.empty()) throw ValidationError("truth file lists no test functions");
    const TestFunctionInfo* info = &truth.test_functions.front();
    if (!a.task_name.empty()) {
      info = nullptr;
      for (const auto& t : truth.test_functions)
        if (t.name == a.task_name) info = &t;
      if (!info) throw InputError("no test function named '" + a.task_name + "'");
    }
    chosen = info->name;
    oracle = std::make_unique<GridOracle>(realize_test_function(truth.params, info->seed, truth.grid_per_dim));
    spec.maximizer = BoxSearch{};
  } else {
    throw UsageError("--mode must be offline or online-synth");
  }
  if (params.input_dim() != oracle->dim())
    throw InputError("model has input dimension " + std::to_string(params.input_dim()) + " but the task has " +
                     std::to_string(oracle->dim()));

  const BoTrace trace = run_bo(params, *oracle, spec, a.iters, a.seed, "hyperbo");
  ensure_dir(a.out);
  const fs::path trace_path = fs::path(a.out) / "trace.csv";
  write_file(trace_path.string(), format_trace_csv(trace, oracle->dim()));

  RunManifest m;
  m.command = "run";
  m.config = {{"mode", a.mode}, {"acq", format_acquisition(spec)}, {"iters", std::to_string(a.iters)}, {"task", chosen}};
  m.seeds = {a.seed};
  m.inputs = {{a.model, hash_file(a.model)}, {a.task, hash_file(a.task)}};
  m.outputs = {trace_path.string()};
  write_manifest(m, fs::path(a.out) / "manifest.json");

  if (!trace.steps.empty()) {
    std::cout << "final_best=" << str(trace.best_so_far().back()) << "\n";
    if (const auto fmax = oracle->max_value()) std::cout << "simple_regret=" << str(simple_regret(trace, *fmax)) << "\n";
  }
  return 0;
}

// ---- synth ------------------------------------------------------------------

struct SynthArgs {
  std::size_t tasks = 0;
  std::size_t points = 0;
  std::size_t dim = 0;
  double matched_fraction = 0.0;
  double noise = 0.01;
  double amplitude = 1.0;
  double lengthscale = 0.3;
  double mean = 0.0;
  std::size_t test_functions = 0;
  std::size_t grid = 0;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_synth(const SynthArgs& a) {
  if (a.tasks < 1 || a.points < 1 || a.dim < 1) throw UsageError("--tasks, --points and --dim must be positive");
  if (!(a.matched_fraction >= 0.0 && a.matched_fraction <= 1.0))
    throw UsageError("--matched-fraction must be in [0, 1]");
  if (!(a.noise > 0.0) || !(a.amplitude > 0.0) || !(a.lengthscale > 0.0))
    throw UsageError("--noise, --amplitude and --lengthscale must be positive");
  if (a.grid == 1) throw UsageError("--grid needs at least 2 points per dimension");
  const auto truth = GpParams::const_matern(a.mean, a.amplitude,
                                            Eigen::VectorXd::Constant(static_cast<Eigen::Index>(a.dim), a.lengthscale),
                                            a.noise);
  const SynthConfig cfg{a.tasks, a.points, truth, a.noise, a.matched_fraction, a.seed, a.test_functions, a.grid};
  const SynthResult res = synth_generate(cfg);
  ensure_dir(a.out);
  const fs::path out(a.out);
  save_dataset(res.dataset, (out / "dataset.json").string());
  write_file((out / "truth.json").string(), serialize_truth(cfg, res));

  RunManifest m;
  m.command = "synth";
  m.config = {{"tasks", std::to_string(a.tasks)},      {"points", std::to_string(a.points)},
              {"dim", std::to_string(a.dim)},          {"matched_fraction", str(a.matched_fraction)},
              {"noise", str(a.noise)},                 {"amplitude", str(a.amplitude)},
              {"lengthscale", str(a.lengthscale)},     {"mean", str(a.mean)},
              {"test_functions", std::to_string(a.test_functions)}, {"grid", std::to_string(res.grid_per_dim)}};
  m.seeds = {a.seed};
  m.outputs = {(out / "dataset.json").string(), (out / "truth.json").string()};
  write_manifest(m, out / "manifest.json");
  std::cout << "tasks=" << res.dataset.n_tasks() << " points_per_task=" << a.points << "\n";
  return 0;
}

// ---- bench ------------------------------------------------------------------

struct BenchArgs {
  std::string data;
  std::vector<std::string> holdout;
  std::string holdout_prefix;
  std::string methods = "rand,stbo,hyperbo-nll,hyperbo-kl";
  int repeats = 5;
  int iters = 30;
  std::uint64_t seed = 0;
  std::string acq = "pi:0.1";
  std::string arch = "const-matern";
  int pretrain_iters = 200;
  std::size_t jobs = 1;
  std::string out_dir;
};

const std::set<std::string> kMethods{"rand", "stbo", "hyperbo-nll", "hyperbo-kl"};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int cmd_bench(const BenchArgs& a) {
  const auto methods = split_list(a.methods);
  if (methods.empty()) throw UsageError("--methods is empty");
  for (const auto& m : methods)
    if (!kMethods.count(m)) throw UsageError("unknown method '" + m + "'");
  if (a.repeats < 1 || a.iters < 0) throw UsageError("--repeats must be positive and --iters non-negative");
  if (a.holdout.empty() == a.holdout_prefix.empty()) throw UsageError("give exactly one of --holdout and --holdout-prefix");

  const auto ds = load_dataset(a.data);
  auto held = [&](const std::string& name) {
    if (!a.holdout_prefix.empty()) return name.starts_with(a.holdout_prefix);
    return std::find(a.holdout.begin(), a.holdout.end(), name) != a.holdout.end();
  };
  for (const auto& h : a.holdout) (void)ds.task(h);
  const auto test = ds.filter(held);
  const auto train = ds.filter([&](const std::string& n) { return !held(n); });
  if (test.tasks.empty()) throw InputError("no task matches the holdout selection");

  const fs::path out(a.out_dir);
  ensure_dir(out / "traces");
  const std::map<std::string, std::string> inputs{{a.data, hash_file(a.data)}};
  const AcquisitionSpec spec = parse_acquisition(a.acq);

  std::map<std::string, GpParams> models;
  for (const auto& m : methods) {
    if (!m.starts_with("hyperbo-")) continue;
    if (train.tasks.empty()) throw InputError("pre-training needs at least one task outside the holdout");
    PretrainArgs pa;
    pa.objective = m == "hyperbo-nll" ? "nll" : "kl";
    pa.arch = a.arch;
    pa.iters = a.pretrain_iters;
    pa.seed = a.seed;
    pa.threads = a.jobs;
    models.emplace(m, pretrain_into(train, pa, out / ("pretrain_" + m), "bench/pretrain", inputs).params);
  }

  struct Cell {
    std::string method;
    const TaskData* task;
    int repeat;
  };
  std::vector<Cell> cells;
  for (const auto& m : methods)
    for (const auto& t : test.tasks)
      for (int r = 0; r < a.repeats; ++r) cells.push_back({m, &t, r});

  std::vector<std::string> outputs(cells.size());
  detail::parallel_for(cells.size(), a.jobs, [&](std::size_t i) {
    const Cell& c = cells[i];
    TableOracle oracle = table_oracle(*c.task);
    const std::uint64_t seed = mix(a.seed, static_cast<std::uint64_t>(c.repeat));
    BoTrace trace;
    if (c.method == "rand") trace = run_random(oracle, a.iters, seed);
    else if (c.method == "stbo") trace = run_stbo(ModelArchitecture{parse_architecture(a.arch)}, oracle, spec, a.iters, seed);
    else trace = run_bo(models.at(c.method), oracle, spec, a.iters, seed, c.method);
    const fs::path p = out / "traces" / (c.method + "__" + c.task->name + "__r" + std::to_string(c.repeat) + ".csv");
    write_file(p.string(), format_trace_csv(trace, oracle.dim()));
    outputs[i] = p.string();
  });

  RunManifest m;
  m.command = "bench";
  m.config = {{"methods", a.methods},  {"repeats", std::to_string(a.repeats)},
              {"iters", std::to_string(a.iters)}, {"acq", format_acquisition(spec)},
              {"arch", a.arch},        {"pretrain_iters", std::to_string(a.pretrain_iters)},
              {"holdout_prefix", a.holdout_prefix}};
  for (std::size_t i = 0; i < a.holdout.size(); ++i) m.config["holdout_" + std::to_string(i)] = a.holdout[i];
  m.seeds = {a.seed};
  for (int r = 0; r < a.repeats; ++r) m.seeds.push_back(mix(a.seed, static_cast<std::uint64_t>(r)));
  m.inputs = inputs;
  m.outputs = outputs;
  for (const auto& t : train.tasks) m.tasks.push_back(t.name);
  write_manifest(m, out / "manifest.json");
  std::cout << "traces=" << cells.size() << "\n";
  return 0;
}

// ---- report -----------------------------------------------------------------

struct ReportArgs {
  std::string traces_dir;
  std::string criterion = "median@10";
  std::string out;
};

int cmd_report(const ReportArgs& a) {
  const ProfileCriterion criterion = parse_criterion(a.criterion);
  static const std::regex kName(R"((.+)__(.+)__r(\d+)\.csv)");
  // method -> task -> repeat -> best-so-far curve
  std::map<std::string, std::map<std::string, std::map<int, std::vector<double>>>> curves;
  std::map<std::string, std::string> inputs;
  if (!fs::is_directory(a.traces_dir)) throw ValidationError("'" + a.traces_dir + "' is not a directory");
  for (const auto& entry : fs::directory_iterator(a.traces_dir)) {
    std::smatch match;
    const std::string name = entry.path().filename().string();
    if (!std::regex_match(name, match, kName)) continue;
    const std::string text = read_file(entry.path().string());
    std::vector<double> best;
    for (const auto& row : parse_trace_csv(text)) best.push_back(row.best_so_far);
    curves[match[1]][match[2]][std::stoi(match[3])] = std::move(best);
    inputs[entry.path().string()] = git_blob_hash(text);
  }
  if (curves.empty()) throw ValidationError("no trace files in '" + a.traces_dir + "'");

  std::vector<std::string> methods;
  std::vector<std::string> tasks;
  for (const auto& [task, _] : curves.begin()->second) tasks.push_back(task);
  CurveSet set;
  std::ostringstream summary;
  summary << "method,task,repeats,mean_best,min_best,max_best\n";
  for (const auto& [method, by_task] : curves) {
    methods.push_back(method);
    if (by_task.size() != tasks.size()) throw ValidationError("method '" + method + "' does not cover every task");
    std::vector<std::vector<double>> per_task;
    for (const auto& task : tasks) {
      const auto it = by_task.find(task);
      if (it == by_task.end()) throw ValidationError("method '" + method + "' has no traces for task '" + task + "'");
      const std::size_t len = it->second.begin()->second.size();
      if (len == 0) throw ValidationError("empty trace for method '" + method + "', task '" + task + "'");
      std::vector<double> mean(len, 0.0);
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (const auto& [r, c] : it->second) {
        if (c.size() != len) throw ValidationError("traces of different lengths for task '" + task + "'");
        for (std::size_t i = 0; i < len; ++i) mean[i] += c[i] / static_cast<double>(it->second.size());
        lo = std::min(lo, c.back());
        hi = std::max(hi, c.back());
      }
      summary << method << ',' << task << ',' << it->second.size() << ',' << str(mean.back()) << ',' << str(lo) << ','
              << str(hi) << '\n';
      per_task.push_back(std::move(mean));
    }
    set.push_back(std::move(per_task));
  }
  const auto fractions = performance_profile(set, criterion);

  ensure_dir(a.out);
  const fs::path out(a.out);
  write_file((out / "profile.csv").string(), format_profile_csv(methods, fractions));
  write_file((out / "summary.csv").string(), summary.str());
  RunManifest m;
  m.command = "report";
  m.config = {{"criterion", a.criterion}};
  m.inputs = inputs;
  m.outputs = {(out / "profile.csv").string(), (out / "summary.csv").string()};
  write_manifest(m, out / "manifest.json");
  for (std::size_t i = 0; i < methods.size(); ++i)
    std::cout << methods[i] << " final_fraction=" << str(fractions[i].back()) << "\n";
  return 0;
}

}  // namespace

template <typename Parse>
CLI::Validator token_check(Parse parse, const std::string& name) {
  return CLI::Validator(
      [parse](std::string& s) {
        try {
          (void)parse(s);
          return std::string();
        } catch (const std::exception& e) {
          return std::string(e.what());
        }
      },
      name);
}

int main(int argc, char** argv) {
  const auto acq_check = token_check(parse_acquisition, "ACQ");
  CLI::App app{"Pre-trained Gaussian-process priors for Bayesian optimization"};
  app.require_subcommand(1);

  PretrainArgs pa;
  auto* pretrain_cmd = app.add_subcommand("pretrain", "Fit a GP prior to a multi-task dataset");
  pretrain_cmd->add_option("--data", pa.data, "Dataset document")->required()->check(CLI::ExistingFile);
  pretrain_cmd->add_option("--objective", pa.objective, "nll | kl | nllkl")
      ->check(CLI::IsMember({"nll", "kl", "nllkl"}));
  pretrain_cmd->add_option("--lambda", pa.lambda, "KL weight for nllkl")->check(CLI::NonNegativeNumber);
  pretrain_cmd->add_option("--arch", pa.arch, "const-matern | mlp8-matern")
      ->check(CLI::IsMember({"const-matern", "mlp8-matern"}));
  pretrain_cmd->add_option("--iters", pa.iters, "Maximum optimizer iterations")->check(CLI::NonNegativeNumber);
  pretrain_cmd->add_option("--batch", pa.batch, "Points per task per step (0 = full batch)");
  pretrain_cmd->add_option("--seed", pa.seed);
  pretrain_cmd->add_option("--threads", pa.threads, "Workers for per-task objective terms")->check(CLI::PositiveNumber);
  pretrain_cmd->add_option("--out", pa.out, "Output directory")->required();

  RunArgs ra;
  auto* run_cmd = app.add_subcommand("run", "Optimize one task with a frozen pre-trained prior");
  run_cmd->add_option("--model", ra.model, "Model document")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--task", ra.task, "Dataset document (offline) or truth document (online-synth)")
      ->required()
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--task-name", ra.task_name, "Task or test-function name (default: first)");
  run_cmd->add_option("--mode", ra.mode, "offline | online-synth")->check(CLI::IsMember({"offline", "online-synth"}));
  run_cmd->add_option("--acq", ra.acq, "pi[:threshold] | ei | ucb[:zeta]")->check(acq_check);
  run_cmd->add_option("--iters", ra.iters, "BO iterations T")->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--seed", ra.seed);
  run_cmd->add_option("--out", ra.out, "Output directory")->required();

  SynthArgs sa;
  auto* synth_cmd = app.add_subcommand("synth", "Sample tasks from a known GP");
  synth_cmd->add_option("--tasks", sa.tasks, "Number of tasks N")->required();
  synth_cmd->add_option("--points", sa.points, "Points per task M")->required();
  synth_cmd->add_option("--dim", sa.dim, "Input dimension d")->required();
  synth_cmd->add_option("--matched-fraction", sa.matched_fraction, "Share of inputs common to every task");
  synth_cmd->add_option("--noise", sa.noise, "Observation noise variance");
  synth_cmd->add_option("--amplitude", sa.amplitude, "True kernel amplitude");
  synth_cmd->add_option("--lengthscale", sa.lengthscale, "True lengthscale, every dimension");
  synth_cmd->add_option("--mean", sa.mean, "True constant mean");
  synth_cmd->add_option("--test-functions", sa.test_functions, "Held-out functions realized on a grid");
  synth_cmd->add_option("--grid", sa.grid, "Grid points per dimension (0 = default)");
  synth_cmd->add_option("--seed", sa.seed);
  synth_cmd->add_option("--out", sa.out, "Output directory")->required();

  BenchArgs ba;
  auto* bench_cmd = app.add_subcommand("bench", "Leave-task-out offline benchmark");
  bench_cmd->add_option("--data", ba.data, "Dataset document")->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("--holdout", ba.holdout, "Held-out task name (repeatable)");
  bench_cmd->add_option("--holdout-prefix", ba.holdout_prefix, "Hold out every task with this name prefix");
  bench_cmd->add_option("--methods", ba.methods, "Comma-separated: rand,stbo,hyperbo-nll,hyperbo-kl");
  bench_cmd->add_option("--repeats", ba.repeats)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--iters", ba.iters)->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--seed", ba.seed);
  bench_cmd->add_option("--acq", ba.acq)->check(acq_check);
  bench_cmd->add_option("--arch", ba.arch)->check(CLI::IsMember({"const-matern", "mlp8-matern"}));
  bench_cmd->add_option("--pretrain-iters", ba.pretrain_iters)->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--jobs", ba.jobs, "Worker threads")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--out-dir", ba.out_dir, "Output directory")->required();

  ReportArgs rp;
  auto* report_cmd = app.add_subcommand("report", "Performance profile and per-task summary of bench traces");
  report_cmd->add_option("--traces-dir", rp.traces_dir, "Directory of <method>__<task>__r<k>.csv traces")->required();
  report_cmd->add_option("--criterion", rp.criterion, "median@K")->check(token_check(parse_criterion, "CRITERION"));
  report_cmd->add_option("--out", rp.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageExit;
  }

  try {
    if (*pretrain_cmd) return cmd_pretrain(pa);
    if (*run_cmd) return cmd_run(ra);
    if (*synth_cmd) return cmd_synth(sa);
    if (*bench_cmd) return cmd_bench(ba);
    if (*report_cmd) return cmd_report(rp);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return kUsageExit;
}
