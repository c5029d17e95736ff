#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <regex>

#include "pregp/bo.hpp"
#include "pregp/dataset_io.hpp"
#include "pregp/gp_params.hpp"
#include "pregp/matching.hpp"
#include "pregp/profile.hpp"
#include "pregp/trace_io.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace pregp;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result cli(const std::string& args, const fs::path& cwd) {
  const std::string cmd = "cd '" + cwd.string() + "' && '" PREGP_CLI "' " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe)) r.out += buf.data();
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) { return read_file(p.string()); }

double printed(const std::string& out, const std::string& key) {
  std::smatch m;
  REQUIRE(std::regex_search(out, m, std::regex(key + "=([^\\s]+)")));
  return std::stod(m[1]);
}

const char* kTwoTasks = R"({
  "search_space": {"dims": [{"name": "x", "low": 0.0, "high": 1.0, "scaling": "linear"}]},
  "tasks": [
    {"name": "a", "points": [{"x": [0.1], "y": 0.2, "feasible": true}, {"x": [0.4], "y": 0.9, "feasible": true},
                             {"x": [0.7], "y": 0.1, "feasible": true}]},
    {"name": "b", "points": [{"x": [0.2], "y": -0.3, "feasible": true}, {"x": [0.5], "y": 0.6, "feasible": true},
                             {"x": [0.9], "y": 0.0, "feasible": true}]}]
})";

}  // namespace

TEST_CASE("cli pretrain") {
  testing::TempDir dir("cli_pretrain");
  write_file((dir.path / "d.json").string(), kTwoTasks);
  const auto first = cli("pretrain --data d.json --objective nll --iters 30 --seed 4 --out m1", dir.path);
  REQUIRE(first.code == 0);
  CHECK(fs::exists(dir.path / "m1" / "model.json"));
  CHECK(fs::exists(dir.path / "m1" / "manifest.json"));
  CHECK(slurp(dir.path / "m1" / "train_log.csv").starts_with("iter,objective,grad_norm,wall_ms\n"));
  CHECK(printed(first.out, "final_objective") <= printed(first.out, "initial_objective"));
  REQUIRE(cli("pretrain --data d.json --objective nll --iters 30 --seed 4 --out m2", dir.path).code == 0);
  CHECK(slurp(dir.path / "m1" / "model.json") == slurp(dir.path / "m2" / "model.json"));
  (void)load_params((dir.path / "m1" / "model.json").string());

  const auto kl = cli("pretrain --data d.json --objective kl --out m3", dir.path);
  CHECK(kl.code == 3);
  CHECK(kl.out.find("matching") != std::string::npos);
  CHECK(cli("pretrain --data d.json --objective xyz --out m4", dir.path).code == 2);
  CHECK(cli("pretrain --data missing.json --out m4", dir.path).code == 2);
}

TEST_CASE("cli synth and run") {
  testing::TempDir dir("cli_run");
  REQUIRE(cli("synth --tasks 3 --points 5 --dim 2 --matched-fraction 1 --test-functions 1 --grid 30 --seed 2 --out s",
              dir.path)
              .code == 0);
  const auto ds = load_dataset((dir.path / "s" / "dataset.json").string());
  CHECK(ds.n_tasks() == 3);
  for (const auto& t : ds.tasks) CHECK(t.observations.size() == 5);
  CHECK(extract_matching(ds).n_points() == 5);
  const auto truth_params = load_params((dir.path / "s" / "truth.json").string());
  CHECK(truth_params.input_dim() == 2);
  CHECK(cli("synth --tasks 0 --points 5 --dim 2 --out bad", dir.path).code == 2);
  CHECK(cli("synth --tasks 2 --points 5 --dim 2 --matched-fraction 1.5 --out bad", dir.path).code == 2);

  // offline run on a 10-point table
  REQUIRE(cli("synth --tasks 2 --points 10 --dim 2 --seed 3 --out t", dir.path).code == 0);
  save_params(GpParams::const_matern(0.0, 1.0, Eigen::Vector2d(0.3, 0.3), 0.01), (dir.path / "model.json").string());
  const auto run = cli("run --model model.json --task t/dataset.json --task-name task_1 --iters 10 --out r", dir.path);
  REQUIRE(run.code == 0);
  const auto rows = parse_trace_csv(slurp(dir.path / "r" / "trace.csv"));
  CHECK(rows.size() == 10);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i) CHECK(rows[i].best_so_far >= rows[i - 1].best_so_far);
    best = std::max(best, rows[i].y);
  }
  const auto table = load_dataset((dir.path / "t" / "dataset.json").string()).task("task_1").observations.ys;
  CHECK(printed(run.out, "simple_regret") == doctest::Approx(table.maxCoeff() - best).epsilon(1e-15));
  CHECK(printed(run.out, "final_best") == best);

  const auto online = cli("run --model model.json --task s/truth.json --mode online-synth --iters 4 --out o", dir.path);
  CHECK(online.code == 0);
  CHECK(printed(online.out, "simple_regret") >= 0.0);

  save_params(GpParams::const_matern(0.0, 1.0, Eigen::Vector3d(0.3, 0.3, 0.3), 0.01), (dir.path / "m3.json").string());
  CHECK(cli("run --model m3.json --task t/dataset.json --out r3", dir.path).code == 3);
  CHECK(cli("run --model model.json --task t/dataset.json --acq poi --out r3", dir.path).code == 2);
}

TEST_CASE("cli bench and report") {
  testing::TempDir dir("cli_bench");
  REQUIRE(cli("synth --tasks 5 --points 12 --dim 2 --matched-fraction 0.5 --seed 5 --out s", dir.path).code == 0);
  REQUIRE(cli("bench --data s/dataset.json --holdout task_4 --methods rand --repeats 2 --iters 6 --out-dir b0", dir.path)
              .code == 0);
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir.path / "b0" / "traces")) n += e.path().extension() == ".csv";
  CHECK(n == 2);

  const std::string bench =
      "bench --data s/dataset.json --holdout-prefix task_3 --methods rand,stbo,hyperbo-nll,hyperbo-kl --repeats 2 "
      "--iters 6 --pretrain-iters 15 --seed 9 --jobs 2 --out-dir ";
  REQUIRE(cli(bench + "b1", dir.path).code == 0);
  const std::string manifest = slurp(dir.path / "b1" / "pretrain_hyperbo-nll" / "manifest.json");
  CHECK(manifest.find("\"task_3\"") == std::string::npos);
  CHECK(manifest.find("\"task_2\"") != std::string::npos);

  REQUIRE(cli("report --traces-dir b1/traces --criterion median@3 --out rep", dir.path).code == 0);
  const std::vector<std::string> methods{"hyperbo-kl", "hyperbo-nll", "rand", "stbo"};
  CurveSet curves;
  for (const auto& m : methods) {
    std::vector<double> mean(6, 0.0);
    for (int r = 0; r < 2; ++r) {
      const auto rows = parse_trace_csv(slurp(dir.path / "b1" / "traces" / (m + "__task_3__r" + std::to_string(r) + ".csv")));
      for (std::size_t i = 0; i < 6; ++i) mean[i] += rows[i].best_so_far / 2.0;
    }
    curves.push_back({mean});
  }
  CHECK(slurp(dir.path / "rep" / "profile.csv") ==
        format_profile_csv(methods, performance_profile(curves, parse_criterion("median@3"))));
  CHECK(slurp(dir.path / "rep" / "summary.csv").starts_with("method,task,repeats,mean_best,min_best,max_best\n"));

  CHECK(cli("bench --data s/dataset.json --holdout task_4 --methods rand,bogus --out-dir b2", dir.path).code == 2);
  CHECK(cli("bench --data s/dataset.json --holdout nope --methods rand --out-dir b2", dir.path).code == 3);
  CHECK(cli("report --traces-dir b1/traces --criterion mean@3 --out rep2", dir.path).code == 2);
}
