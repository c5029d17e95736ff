#include <doctest.h>

#include "pregp/dataset_io.hpp"
#include "pregp/error.hpp"
#include "pregp/gp_prior.hpp"
#include "pregp/manifest.hpp"
#include "pregp/matching.hpp"
#include "pregp/synth.hpp"
#include "pregp/warping.hpp"
#include "support.hpp"

using namespace pregp;

namespace {

const char* kFixture = R"({
  "search_space": {"dims": [
    {"name": "lr", "low": 1e-05, "high": 10.0, "scaling": "log"},
    {"name": "momentum", "low": 0.0, "high": 0.99, "scaling": "one-minus-log"},
    {"name": "width", "low": 16.0, "high": 256.0, "scaling": "linear"}]},
  "output_warping": "neg-log-error",
  "tasks": [
    {"name": "a", "points": [
      {"x": [0.001, 0.9, 64.0], "y": 0.25, "feasible": true},
      {"x": [1.0, 0.5, 128.0], "y": 0.125, "feasible": true},
      {"x": [5.0, 0.0, 16.0], "feasible": false}]},
    {"name": "b", "points": [
      {"x": [0.001, 0.9, 64.0], "y": 0.5, "feasible": true}]}]
})";

SearchSpace mixed_space() {
  return SearchSpace({{"lr", 1e-5, 10.0, Scaling::log},
                      {"momentum", 0.0, 0.99, Scaling::one_minus_log},
                      {"width", 16.0, 256.0, Scaling::linear}});
}

}  // namespace

TEST_CASE("search space validation") {
  CHECK_THROWS_AS(SearchSpace({{"a", 1.0, 1.0, Scaling::linear}}), ValidationError);
  CHECK_THROWS_AS(SearchSpace({{"a", 0.0, 1.0, Scaling::log}}), ValidationError);
  CHECK_THROWS_AS(SearchSpace({{"a", 0.0, 1.0, Scaling::one_minus_log}}), ValidationError);
  CHECK(SearchSpace::unit_cube(3).dim() == 3);
}

TEST_CASE("input warping") {
  const SearchSpace lin({{"x", 2.0, 6.0, Scaling::linear}});
  CHECK(warp_input(std::vector<double>{2.0}, lin)(0) == 0.0);
  CHECK(warp_input(std::vector<double>{6.0}, lin)(0) == 1.0);
  const SearchSpace eta({{"eta", 1e-5, 10.0, Scaling::log}});
  CHECK(warp_input(std::vector<double>{1.0}, eta)(0) ==
        doctest::Approx((std::log(1.0) - std::log(1e-5)) / (std::log(10.0) - std::log(1e-5))).epsilon(1e-14));
  CHECK(warp_input(std::vector<double>{1.0}, eta)(0) == doctest::Approx(5.0 / 6.0).epsilon(1e-14));
  CHECK_THROWS_AS((void)warp_input(std::vector<double>{11.0}, eta), ValidationError);
  CHECK_THROWS_AS((void)unwarp_input(Point::Constant(1, 1.5), eta), ValidationError);

  const auto space = mixed_space();
  std::mt19937_64 rng(40);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> raw{std::exp(testing::uniform(rng, std::log(1e-5), std::log(10.0))),
                            testing::uniform(rng, 0.0, 0.99), testing::uniform(rng, 16.0, 256.0)};
    const auto back = unwarp_input(warp_input(raw, space), space);
    for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(back[j] - raw[j]) <= 1e-12 * std::max(1.0, std::abs(raw[j])));
  }
}

TEST_CASE("output warping") {
  CHECK(warp_output(0.0) == doctest::Approx(-std::log(1e-10)).epsilon(1e-14));
  CHECK(warp_output(0.0) == doctest::Approx(23.0259).epsilon(1e-5));
  CHECK(warp_output(0.1) == doctest::Approx(2.302585).epsilon(1e-6));
  CHECK(warp_output(0.2) < warp_output(0.1));
  CHECK_THROWS_AS((void)warp_output(-0.01), ValidationError);
}

TEST_CASE("online softplus map") {
  const std::vector<double> y{0.3, 1.0, -0.5, 0.0, 2.0};
  const std::vector<bool> ok{true, true, true, false, true};
  const auto out = online_map(y, ok);
  CHECK(out[3] == kInfeasibleValue);
  CHECK(out[4] == 2.0);
  for (std::size_t i = 0; i < out.size(); ++i)
    if (ok[i]) CHECK((out[i] > -2.0 && out[i] <= 2.0));
  // lower median of {0.3, 1.0, -0.5, 2.0} is 0.3
  CHECK(out[0] == doctest::Approx(4.0 * std::log(2.0) / softplus(2.0 - 0.3) - 2.0).epsilon(1e-14));
  CHECK_THROWS_AS((void)online_map(std::vector<double>{1.0}, std::vector<bool>{false}), ValidationError);
  CHECK(lower_median({4.0, 1.0, 3.0, 2.0}) == 2.0);
}

TEST_CASE("dataset documents") {
  const auto ds = parse_dataset(kFixture);
  CHECK(ds.n_tasks() == 2);
  CHECK(ds.tasks[0].raw.size() == 3);
  CHECK(!ds.tasks[0].raw[2].feasible);
  CHECK(ds.tasks[0].observations.size() == 2);  // infeasible trial dropped under neg-log-error
  CHECK(ds.tasks[0].observations.ys(0) == doctest::Approx(-std::log(0.25 + 1e-10)).epsilon(1e-14));
  CHECK(serialize_dataset(parse_dataset(serialize_dataset(ds))) == serialize_dataset(ds));

  testing::TempDir dir("io");
  const auto path = (dir.path / "d.json").string();
  save_dataset(ds, path);
  const auto again = load_dataset(path);
  CHECK(serialize_dataset(again) == serialize_dataset(ds));
  CHECK(again.tasks[0].raw == ds.tasks[0].raw);

  CHECK_THROWS_AS((void)parse_dataset(R"({"search_space":{"dims":[{"name":"x","low":0,"high":1,"scaling":"linear"}]},"tasks":[]})"),
                  ValidationError);
  try {
    (void)parse_dataset(R"({"search_space":{"dims":[{"name":"x","low":0,"high":1,"scaling":"linear"}]},
                            "tasks":[{"name":"a","points":[{"x":[0.5],"y":"bad","feasible":true}]}]})",
                        "fixture");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("tasks[0].points[0].y") != std::string::npos);
  }
  CHECK_THROWS_AS((void)parse_dataset(R"({"search_space":{"dims":[{"name":"x","low":0,"high":1,"scaling":"linear"}]},
                            "tasks":[{"name":"a","points":[{"x":[1.5],"y":0.1,"feasible":true}]}]})"),
                  ValidationError);
}

TEST_CASE("online softplus datasets keep infeasible trials at -2") {
  std::vector<std::pair<std::string, std::vector<RawTrial>>> tasks{
      {"a", {{{0.1}, 1.0, true}, {{0.5}, std::nullopt, false}, {{0.9}, 3.0, true}}}};
  const auto ds = build_dataset(SearchSpace::unit_cube(1), OutputWarping::online_softplus, tasks);
  const auto& ys = ds.tasks[0].observations.ys;
  CHECK(ys.size() == 3);
  CHECK(ys(1) == -2.0);
  CHECK(ys(2) == 2.0);
}

TEST_CASE("matching extraction") {
  std::mt19937_64 rng(41);
  const Points shared = testing::uniform_points(rng, 5, 2);
  std::vector<ObservationSet> obs;
  for (int t = 0; t < 3; ++t) obs.emplace_back(shared, testing::uniform_vector(rng, 5, 0.0, 1.0));
  const auto full = extract_matching(make_dataset(SearchSpace::unit_cube(2), {"a", "b", "c"}, obs));
  CHECK(full.n_points() == 5);
  CHECK(full.n_tasks() == 3);

  std::vector<ObservationSet> disjoint;
  for (int t = 0; t < 3; ++t)
    disjoint.emplace_back(testing::uniform_points(rng, 5, 2), testing::uniform_vector(rng, 5, 0.0, 1.0));
  CHECK_THROWS_AS((void)extract_matching(make_dataset(SearchSpace::unit_cube(2), {"a", "b", "c"}, disjoint)),
                  NoMatchingDataError);
  CHECK_THROWS_AS((void)extract_matching(make_dataset(SearchSpace::unit_cube(2), {"a"}, {obs[0]})), InputError);

  const auto truth = GpParams::const_matern(0.0, 1.0, Eigen::Vector2d(0.3, 0.3), 0.01);
  const auto half = synth_generate({4, 10, truth, 0.01, 0.5, 3, 0, 0}).dataset;
  CHECK(extract_matching(half).n_points() == 5);
}

TEST_CASE("synthetic generator") {
  const auto truth = GpParams::const_matern(0.5, 1.0, Eigen::Vector2d(0.3, 0.3), 0.01);
  SynthConfig cfg{3, 5, truth, 0.01, 0.4, 11, 2, 20};
  const auto a = synth_generate(cfg);
  const auto b = synth_generate(cfg);
  CHECK(serialize_dataset(a.dataset) == serialize_dataset(b.dataset));
  CHECK(serialize_truth(cfg, a) == serialize_truth(cfg, b));
  CHECK(a.dataset.n_tasks() == 3);
  for (const auto& t : a.dataset.tasks) CHECK(t.observations.size() == 5);

  SUBCASE("independent draws at shared inputs") {
    SynthConfig noiseless{2, 4, truth, 0.0, 1.0, 12, 0, 0};
    const auto ds = synth_generate(noiseless).dataset;
    CHECK(ds.tasks[0].observations.xs == ds.tasks[1].observations.xs);
    CHECK(ds.tasks[0].observations.ys != ds.tasks[1].observations.ys);
  }
  SUBCASE("moments at a matched input") {
    SynthConfig many{2000, 2, truth, 0.01, 0.5, 13, 0, 0};
    const auto ds = synth_generate(many).dataset;
    Eigen::VectorXd y(2000);
    for (int t = 0; t < 2000; ++t) y(t) = ds.tasks[static_cast<std::size_t>(t)].observations.ys(0);
    const double mean = y.mean();
    const double var = (y.array() - mean).square().sum() / 1999.0;
    const double expected_var = 1.0 + 0.01;
    CHECK(std::abs(var - expected_var) <= 0.1 * expected_var);
    CHECK(std::abs(mean - 0.5) <= 3.0 * std::sqrt(expected_var / 2000.0));
  }
  SUBCASE("test functions") {
    const auto f = realize_test_function(truth, a.test_functions[0].seed, 20);
    CHECK(f.max_value() == a.test_functions[0].max_value);
    GridOracle oracle(f);
    Eigen::Index arg;
    f.values().maxCoeff(&arg);
    CHECK(oracle.evaluate(f.grid_point(arg)).y == f.max_value());
    const auto parsed = parse_truth(serialize_truth(cfg, a));
    CHECK(parsed.params == truth);
    CHECK(parsed.test_functions.size() == 2);
    CHECK(deserialize_params(serialize_truth(cfg, a)) == truth);
  }
  SUBCASE("anchored realization interpolates the joint draw") {
    const auto f = realize_test_function(truth, 5, 61);
    CHECK(f.values().size() == 61 * 61);
    CHECK(f.values().allFinite());
  }
}

TEST_CASE("blob hash") {
  // git hash-object of an empty file and of "hello\n"
  CHECK(git_blob_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  CHECK(git_blob_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
}
