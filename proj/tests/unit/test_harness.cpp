#include "aoplan/harness.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace aoplan;

namespace {

TrialRecord record_from(std::vector<std::pair<double, double>> pts, std::uint64_t seed = 1) {
  TrialRecord r;
  r.problem = "kink";
  r.planner = "ao-est";
  r.seed = seed;
  for (const auto& [t, c] : pts) r.samples.push_back(TrialSample{t, c, 10, 0});
  r.final_cost = r.samples.empty() ? kInf : r.samples.back().best_cost;
  return r;
}

}  // namespace

TEST_CASE("number formatting round-trips") {
  for (double d : {0.1, 1.0 / 3.0, 1e-300, 123456789.125, kInf, -kInf, 0.0}) {
    CHECK(parse_double(format_double(d)) == d);
  }
  CHECK(std::isnan(parse_double(format_double(std::numeric_limits<double>::quiet_NaN()))));
  CHECK_THROWS(parse_double("1.5x"));
}

TEST_CASE("trials CSV round-trips and rejects increasing costs") {
  std::vector<TrialRecord> recs{record_from({{0.0, kInf}, {0.31, 2.5}, {1.0 / 3.0, 1.25}}, 3),
                                record_from({{0.0, kInf}, {2.0, kInf}}, 4)};
  std::stringstream ss;
  write_trials_csv(ss, recs);
  const std::vector<TrialRecord> back = parse_trials_csv(ss);
  REQUIRE(back.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back[i].seed == recs[i].seed);
    CHECK(back[i].problem == "kink");
    CHECK(back[i].planner == "ao-est");
    CHECK(back[i].samples == recs[i].samples);
  }
  std::stringstream bad;
  CHECK_THROWS_AS(write_trials_csv(bad, {record_from({{0.0, 1.0}, {1.0, 2.0}})}), std::logic_error);
  std::istringstream junk("a,b\n");
  CHECK_THROWS_AS(parse_trials_csv(junk), std::invalid_argument);
}

TEST_CASE("aggregate of one run is that run held between samples") {
  const AggregateCurve c = aggregate({record_from({{0.0, kInf}, {0.25, 3.0}, {0.55, 2.0}})}, 1.0, 0.1);
  REQUIRE(c.time.size() == 11);
  CHECK(std::isnan(c.mean_cost[2]));
  CHECK(c.excluded[2] == 1);
  CHECK(c.mean_cost[3] == 3.0);
  CHECK(c.mean_cost[5] == 3.0);
  CHECK(c.mean_cost[6] == 2.0);
  CHECK(c.mean_cost[10] == 2.0);
  CHECK(c.included[10] == 1);
}

TEST_CASE("aggregate averages the runs that have a solution") {
  const AggregateCurve two = aggregate({record_from({{0.0, 2.0}}), record_from({{0.0, 4.0}})}, 0.5, 0.1);
  for (double m : two.mean_cost) CHECK(m == 3.0);

  // Hand-computed: at t = 0.5 only A has a solution; at 1.0 A = 5, B = 7;
  // at 1.5 A = 4, B = 7, C = 1.
  const std::vector<TrialRecord> recs{record_from({{0.0, kInf}, {0.4, 6.0}, {0.9, 5.0}, {1.2, 4.0}}),
                                      record_from({{0.0, kInf}, {0.7, 7.0}}),
                                      record_from({{0.0, kInf}, {1.5, 1.0}})};
  const AggregateCurve c = aggregate(recs, 1.5, 0.5);
  REQUIRE(c.time.size() == 4);
  CHECK(std::isnan(c.mean_cost[0]));
  CHECK(c.excluded[0] == 3);
  CHECK(c.mean_cost[1] == 6.0);
  CHECK(c.excluded[1] == 2);
  CHECK(c.mean_cost[2] == 6.0);
  CHECK(c.included[2] == 2);
  CHECK(c.mean_cost[3] == doctest::Approx(4.0));
  CHECK(c.excluded[3] == 0);
  CHECK_THROWS(aggregate(recs, 1.0, 0.0));
}

TEST_CASE("solution-index aggregation") {
  TrialRecord a = record_from({});
  a.events = {CostEvent{0, 4.0, 1.0, 10}, CostEvent{1, 3.0, 2.0, 20}};
  TrialRecord b = record_from({});
  b.events = {CostEvent{0, 6.0, 3.0, 10}};
  const SolutionCurve c = aggregate_by_solution({a, b});
  CHECK(c.count == std::vector<int>{2, 1});
  CHECK(c.mean_cost == std::vector<double>{5.0, 3.0});
  CHECK(c.mean_wall_s == std::vector<double>{2.0, 2.0});
}

TEST_CASE("bound curves") {
  CHECK(bound_curve_sets().size() == 3);
  std::ostringstream out;
  emit_bound_curves(out, 100);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "g,easy_s,medium_s,hard_s");
  int rows = 0;
  double prev_easy = kInf;
  while (std::getline(in, line)) {
    std::vector<double> v;
    std::stringstream ls(line);
    for (std::string f; std::getline(ls, f, ',');) v.push_back(parse_double(f));
    REQUIRE(v.size() == 4);
    CHECK(v[1] < v[2]);
    CHECK(v[2] < v[3]);
    CHECK(v[1] < prev_easy);
    prev_easy = v[1];
    const double g = v[0];
    for (int k = 0; k < 3; ++k) {
      const double ab = bound_curve_sets()[static_cast<std::size_t>(k)].alpha_beta;
      const long double delta = static_cast<long double>(ab) * ab / (2.0L + 2.0L * ab * ab);
      const long double dg = delta * g;
      const long double e = (std::log(8.0L / ab) + std::log(std::log(1.0L / g))) / dg + 1.0L / (1.0L - std::exp(-dg));
      CHECK(v[static_cast<std::size_t>(k) + 1] == doctest::Approx(static_cast<double>(e / 1000.0L)).epsilon(1e-12));
    }
    ++rows;
  }
  CHECK(rows == 100);
}

TEST_CASE("run configuration validation") {
  RunConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.planner = "ao-prm";
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = RunConfig{};
  cfg.problem = "maze";
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = RunConfig{};
  cfg.runs = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = RunConfig{};
  cfg.time_limit_s = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  for (const std::string& name : planner_spec_names()) CHECK(to_string(parse_planner_spec(name)) == name);
  CHECK_THROWS_AS(parse_planner_spec("rrt*"), ConfigError);
}

TEST_CASE("trials are reproducible under an iteration budget") {
  RunConfig cfg;
  cfg.problem = "bugtrap";
  cfg.planner = "ao-rrt";
  cfg.max_iterations = 4000;
  cfg.sample_every_iters = 500;
  const TrialRecord a = run_trial(cfg, 8);
  const TrialRecord b = run_trial(cfg, 8);
  REQUIRE(a.events.size() == b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) CHECK(a.events[i].cost == b.events[i].cost);
  CHECK(a.final_cost == b.final_cost);
  CHECK(a.planner_iterations == 4000);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].best_cost == b.samples[i].best_cost);
    CHECK(a.samples[i].tree_size == b.samples[i].tree_size);
  }
}

TEST_CASE("a short benchmark writes its outputs") {
  const auto dir = std::filesystem::temp_directory_path() / "aoplan_harness_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  RunConfig cfg;
  cfg.problem = "kink";
  cfg.planner = "ao-est";
  cfg.runs = 1;
  cfg.time_limit_s = 1.0;
  cfg.out_dir = dir.string();
  const std::vector<TrialRecord> recs = run_benchmark(cfg);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].seed == 1);
  const std::string csv = write_outputs(cfg, recs);
  CHECK(std::filesystem::exists(csv));
  CHECK(std::filesystem::exists(dir / "kink_ao-est_aggregate.csv"));
  CHECK(std::filesystem::exists(dir / "kink_ao-est_solutions.csv"));
  CHECK(std::filesystem::exists(dir / "kink_ao-est_summary.json"));
  std::ifstream in(csv);
  const std::vector<TrialRecord> back = parse_trials_csv(in);
  REQUIRE(back.size() == 1);
  CHECK(back[0].samples == recs[0].samples);
  CHECK(back[0].samples.back().wall_s <= 1.0 + 0.5);
  std::filesystem::remove_all(dir);
}
