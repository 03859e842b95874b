// Acceptance gate. Usage: acceptance [criterion ...]; with no arguments every
// criterion runs. Prints one "AC<n> PASS|FAIL <detail>" line per criterion and
// exits non-zero if any failed.

#include "aoplan/harness.hpp"
#include "aoplan/problems.hpp"
#include "brute_force.hpp"
#include "cost_oracle.hpp"
#include "grid_world.hpp"
#include "planar_oracle.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

using namespace aoplan;

namespace {

const std::string kFixtures = AOPLAN_FIXTURES_DIR;
constexpr int kSeeds = 10;
constexpr double kLongRunS = 60.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double kink_optimum() { return oracle::read_scene(kFixtures + "/kink.txt").optimum; }

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? std::numeric_limits<double>::quiet_NaN() : s / static_cast<double>(v.size());
}

// Benchmarks shared between criteria run once per process.
const std::vector<TrialRecord>& benchmark(const std::string& problem, const std::string& planner) {
  static std::map<std::pair<std::string, std::string>, std::vector<TrialRecord>> cache;
  auto key = std::make_pair(problem, planner);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  RunConfig cfg;
  cfg.problem = problem;
  cfg.planner = planner;
  cfg.time_limit_s = kLongRunS;
  cfg.runs = kSeeds;
  cfg.base_seed = 1;
  cfg.fixtures_dir = kFixtures;
  std::cerr << "  running " << problem << " " << planner << " (" << kSeeds << " x " << kLongRunS << " s)\n";
  return cache.emplace(key, run_benchmark(cfg)).first->second;
}

std::vector<double> final_costs(const std::vector<TrialRecord>& recs) {
  std::vector<double> out;
  for (const TrialRecord& r : recs) out.push_back(r.final_cost);
  return out;
}

Trajectory random_base_trajectory(const ControlSystem& s, int segments, Rng& rng) {
  Trajectory t;
  t.start = s.start;
  State x = s.start;
  for (int i = 0; i < segments; ++i) {
    const ControlSample cs = s.sample_control(x, rng);
    const State y = rollout(s, x, cs.u, cs.duration).states.back();
    t.segments.push_back(Segment{x, cs.u, cs.duration, y});
    x = y;
  }
  return t;
}

Outcome ac1() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(2024);
  int checked = 0;
  int cost_mismatch = 0;
  int feas_mismatch = 0;
  double worst = 0.0;
  for (const std::string& name : problem_names()) {
    auto base = make_problem(name, kFixtures);
    const LiftedSystem l = lift(base);
    for (int k = 0; k < 100; ++k) {
      const Trajectory b = random_base_trajectory(*base, 1 + static_cast<int>(uniform01(rng) * 12), rng);
      Trajectory z;
      z.start = l.system.start;
      State cur = z.start;
      for (const Segment& s : b.segments) {
        const State next = rollout(l.system, cur, s.u, s.duration).states.back();
        z.segments.push_back(Segment{cur, s.u, s.duration, next});
        cur = next;
      }
      const double c = z.end()(l.base_dim());
      const double expected = oracle::running_cost(name, b);
      const double rel = std::abs(c - expected) / std::max(1e-300, std::abs(expected));
      if (expected != 0.0) worst = std::max(worst, rel);
      if (!(std::abs(c - expected) <= 1e-9 * std::abs(expected))) ++cost_mismatch;
      if (replay_feasible(*base, project(z)) != replay_feasible(*base, b) ||
          replay_feasible(l.system, z) != replay_feasible(*base, b)) {
        ++feas_mismatch;
      }
      ++checked;
    }
  }
  const double secs = seconds_since(t0);
  return {cost_mismatch == 0 && feas_mismatch == 0 && secs < 10.0,
          fmt("%d sequences over %zu problems, cost mismatches %d, feasibility mismatches %d, worst rel err %.2e, "
              "%.2f s",
              checked, problem_names().size(), cost_mismatch, feas_mismatch, worst, secs)};
}

Outcome ac2() {
  const auto t0 = std::chrono::steady_clock::now();
  int failures = 0;
  int runs = 0;
  for (double eps : {1.0, 2.0, 5.0}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const oracle::GridWorld w = oracle::random_grid_world(seed);
      const double c_star = oracle::grid_dijkstra(w);
      const MetaResult r =
          bounded_suboptimal(eps, [&w](double cbar) { return oracle::grid_bfs_planner(w, cbar); }, Budget{});
      const double c0 = r.cost_sequence.empty() ? kInf : r.cost_sequence.front().cost;
      const bool ok = r.best && r.best_cost() <= c_star + eps &&
                      r.iterations_run <= static_cast<int>(std::ceil((c0 - c_star) / eps));
      failures += !ok;
      ++runs;
    }
  }
  const double secs = seconds_since(t0);
  return {failures == 0 && secs < 5.0, fmt("%d instances, %d violations, %.2f s", runs, failures, secs)};
}

Outcome ac3() {
  const double c_star = kink_optimum();
  const double est = mean(final_costs(benchmark("kink", "ao-est")));
  const double rrt = mean(final_costs(benchmark("kink", "ao-rrt")));
  const bool ok = est <= 1.05 * c_star && rrt <= 1.10 * c_star;
  return {ok, fmt("C* %.6f, AO-EST mean %.6f (%+.2f%%, limit 5%%), AO-RRT mean %.6f (%+.2f%%, limit 10%%)", c_star, est,
                  100.0 * (est / c_star - 1.0), rrt, 100.0 * (rrt / c_star - 1.0))};
}

Outcome ac4() {
  bool ok = true;
  std::string detail;
  for (const char* problem : {"kink", "bugtrap"}) {
    const double ao = mean(final_costs(benchmark(problem, "ao-est")));
    const double mx = mean(final_costs(benchmark(problem, "m-est")));
    const double mxp = mean(final_costs(benchmark(problem, "m-est-prune")));
    ok = ok && ao <= mx && ao <= mxp;
    detail += fmt("%s: AO-EST %.6f, M-EST %.6f, M-EST-Prune %.6f; ", problem, ao, mx, mxp);
  }
  return {ok, detail};
}

Outcome ac5() {
  const std::vector<TrialRecord>& recs = benchmark("pendulum", "ao-rrt");
  int solved = 0;
  int non_decreasing = 0;
  std::vector<double> c1;
  std::vector<double> c5;
  for (const TrialRecord& r : recs) {
    if (!r.events.empty()) ++solved;
    for (std::size_t i = 1; i < r.events.size(); ++i) {
      if (!(r.events[i].cost < r.events[i - 1].cost)) {
        ++non_decreasing;
        break;
      }
    }
    if (r.events.size() >= 5) {
      c1.push_back(r.events[0].cost);
      c5.push_back(r.events[4].cost);
    }
  }
  const double m1 = mean(c1);
  const double m5 = mean(c5);
  const bool drop_ok = c1.empty() || m5 <= 0.8 * m1;
  const bool ok = solved >= 9 && non_decreasing == 0 && drop_ok;
  return {ok, fmt("solved %d/%d, sequences not strictly decreasing %d, seeds with 5 solutions %zu, mean c1 %.4f, "
                  "mean c5 %.4f (drop %.1f%%, need 20%%), mean final %.4f",
                  solved, kSeeds, non_decreasing, c1.size(), m1, m5, 100.0 * (1.0 - m5 / m1),
                  mean(final_costs(recs)))};
}

Outcome ac6() {
  const double c_star = kink_optimum();
  Rng rng(6);
  const ShrinkageEstimate e = shrinkage_diagnostic(make_problem("kink", kFixtures), PlannerKind::Est, MetaConfig{},
                                                   1.2 * c_star, c_star, 50, Budget::wall(10.0), rng);
  return {e.n_success >= 2 && e.w_lower95 > 0.0,
          fmt("cbar %.6f, %d/%d trials solved, mean %.6f, sd %.6f, w_hat %.4f, 95%% lower bound %.4f", e.cbar,
              e.n_success, e.n_trials, e.mean, e.sd, e.w_hat, e.w_lower95)};
}

Outcome ac7() {
  const double c_star = kink_optimum();
  const double cbar = 0.9 * c_star;
  auto problem = make_problem("kink", kFixtures);
  int found = 0;
  std::int64_t iters = 0;
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    Rng rng(seed);
    auto planner = make_planner(PlannerKind::Est, lift(problem), PlannerConfig{});
    planner->set_cost_scale(cbar);
    planner->rebuild_indices();
    BudgetTracker clock(Budget::wall(30.0));
    const FeasibleResult r = plan_feasible(*planner, CostBoundedGoal(cbar), cbar, clock, rng);
    found += r.path.has_value();
    iters += r.iterations;
  }
  return {found == 0, fmt("cbar %.6f, %d seeds x 30 s, %lld extension attempts, paths returned %d", cbar, kSeeds,
                          static_cast<long long>(iters), found)};
}

Outcome ac8() {
  std::ostringstream out;
  emit_bound_curves(out, 100);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  bool ok = line == "g,easy_s,medium_s,hard_s";
  int row = 0;
  int spots = 0;
  int misordered = 0;
  double worst = 0.0;
  while (std::getline(in, line)) {
    std::vector<double> v;
    std::stringstream ls(line);
    for (std::string f; std::getline(ls, f, ',');) v.push_back(parse_double(f));
    if (v.size() != 4) return {false, "malformed row: " + line};
    misordered += !(v[1] < v[2] && v[2] < v[3]);
    if (row % 5 == 0) {
      const double ab[3] = {0.04, 0.02, 0.01};
      for (int k = 0; k < 3; ++k) {
        const long double a = ab[k];
        const long double g = v[0];
        const long double delta = a * a / (2.0L + 2.0L * a * a);
        const long double dg = delta * g;
        const long double samples =
            (std::log(8.0L / a) + std::log(std::log(1.0L / g))) / dg - 1.0L / std::expm1(-dg);
        const double expected = static_cast<double>(samples / 1000.0L);
        worst = std::max(worst, std::abs(v[static_cast<std::size_t>(k) + 1] - expected) / expected);
      }
      ++spots;
    }
    ++row;
  }
  ok = ok && row == 100 && spots == 20 && worst <= 1e-12 && misordered == 0;
  return {ok, fmt("%d rows, %d spot values, worst rel err %.2e, misordered rows %d", row, spots, worst, misordered)};
}

Outcome ac9() {
  std::vector<std::pair<std::string, Metric>> metrics;
  std::vector<BoxBounds> boxes;
  for (const std::string& name : problem_names()) {
    auto p = make_problem(name, kFixtures);
    for (double wc : {0.1, 0.3, 1.0, 3.0, 10.0}) {
      const LiftedSystem l = lift(p, wc);
      metrics.emplace_back(fmt("%s/wc=%g", name.c_str(), wc), l.system.metric);
      BoxBounds b = p->state_bounds.with_axis(0.0, 2.0 * p->cost_scale_hint, false);
      boxes.push_back(b);
    }
  }
  int kd_mismatch = 0;
  int grid_mismatch = 0;
  long ops = 0;
  for (std::size_t m = 0; m < metrics.size(); ++m) {
    const Metric& metric = metrics[m].second;
    const BoxBounds& box = boxes[m];
    Rng rng(900 + m);
    KdTree tree(metric, 8);
    oracle::PointSet ref;
    DensityGrid grid(metric.dim(), 3, 0.1);
    std::map<int, State> unit;
    int next = 0;
    for (int op = 0; op < 10000; ++op, ++ops) {
      const double r = uniform01(rng);
      if (r < 0.5 || ref.points.empty()) {
        State p = sample_uniform(box, rng);
        tree.insert(next, p);
        ref.points[next] = p;
        const State u = scale_to_unit(p, box);
        grid.insert(next, u);
        unit[next] = u;
        ++next;
      } else if (r < 0.65) {
        auto it = ref.points.begin();
        std::advance(it, std::uniform_int_distribution<std::size_t>(0, ref.points.size() - 1)(rng));
        kd_mismatch += !tree.remove(it->first);
        grid_mismatch += !grid.remove(it->first);
        unit.erase(it->first);
        ref.points.erase(it);
      } else {
        const State q = sample_uniform(box, rng);
        const int id = tree.nearest(q);
        const auto hit = ref.points.find(id);
        kd_mismatch += hit == ref.points.end() || distance(metric, hit->second, q) != ref.nearest_distance(metric, q);
        const State uq = scale_to_unit(q, box);
        int expected = 0;
        for (const auto& axes : grid.projections()) expected += oracle::recount(unit, axes, uq, 0.1);
        grid_mismatch += grid.count(uq) != expected;
      }
    }
  }
  return {kd_mismatch == 0 && grid_mismatch == 0,
          fmt("%zu metrics, %ld operations, KD mismatches %d, density mismatches %d", metrics.size(), ops,
              kd_mismatch, grid_mismatch)};
}

// Fraction of a path's arc length accrued below y = 300.
double low_fraction(const Trajectory& t) {
  double low = 0.0;
  double total = 0.0;
  for (const Segment& s : t.segments) {
    low += oracle::segment_cost("flappy_low", s.from, s.u, s.duration);
    total += oracle::segment_cost("flappy", s.from, s.u, s.duration);
  }
  return total > 0.0 ? low / total : 0.0;
}

Outcome ac10() {
  std::vector<double> frac_len;
  std::vector<double> frac_low;
  int per_seed_lower = 0;
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    double f[2] = {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    int k = 0;
    for (const char* name : {"flappy", "flappy_low"}) {
      Rng rng(seed);
      const MetaResult r =
          ao_plan(make_problem(name, kFixtures), PlannerKind::Rrt, MetaConfig{}, Budget::wall(kLongRunS), rng);
      if (r.best) f[k] = low_fraction(*r.best);
      ++k;
    }
    if (std::isfinite(f[0])) frac_len.push_back(f[0]);
    if (std::isfinite(f[1])) frac_low.push_back(f[1]);
    per_seed_lower += f[1] < f[0];
  }
  const double ml = mean(frac_len);
  const double mo = mean(frac_low);
  const bool ok = static_cast<int>(frac_len.size()) == kSeeds && static_cast<int>(frac_low.size()) == kSeeds && mo < ml;
  return {ok, fmt("solved %zu/%d (length) and %zu/%d (low altitude); mean fraction below y=300: length %.4f, "
                  "low altitude %.4f; seeds with a lower fraction %d/%d",
                  frac_len.size(), kSeeds, frac_low.size(), kSeeds, ml, mo, per_seed_lower, kSeeds)};
}

std::string strip_wall_clock(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string x; std::getline(ls, x, ',');) f.push_back(x);
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (i == 3) continue;
      out << f[i] << ',';
    }
    out << '\n';
  }
  return out.str();
}

Outcome ac11() {
  int configs = 0;
  int differing = 0;
  std::string first_diff;
  for (const std::string& problem : problem_names()) {
    for (const std::string& planner : planner_spec_names()) {
      RunConfig cfg;
      cfg.problem = problem;
      cfg.planner = planner;
      cfg.runs = 2;
      cfg.base_seed = 5;
      cfg.time_limit_s = 3600.0;
      cfg.max_iterations = 3000;
      cfg.sample_every_iters = 250;
      cfg.mx_call_iterations = 1000;
      cfg.fixtures_dir = kFixtures;
      const std::vector<TrialRecord> a = run_benchmark(cfg);
      const std::vector<TrialRecord> b = run_benchmark(cfg);
      bool same = a.size() == b.size();
      for (std::size_t i = 0; same && i < a.size(); ++i) {
        same = a[i].events.size() == b[i].events.size() && a[i].planner_iterations == b[i].planner_iterations;
        for (std::size_t j = 0; same && j < a[i].events.size(); ++j) {
          same = a[i].events[j].cost == b[i].events[j].cost &&
                 a[i].events[j].planner_iterations == b[i].events[j].planner_iterations &&
                 a[i].events[j].iteration == b[i].events[j].iteration;
        }
      }
      std::ostringstream ca;
      std::ostringstream cb;
      write_trials_csv(ca, a);
      write_trials_csv(cb, b);
      same = same && strip_wall_clock(ca.str()) == strip_wall_clock(cb.str());
      if (!same && first_diff.empty()) first_diff = problem + " " + planner;
      differing += !same;
      ++configs;
    }
  }
  return {differing == 0, fmt("%d configurations rerun, %d differ%s%s", configs, differing,
                              first_diff.empty() ? "" : ", first: ", first_diff.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::function<Outcome()>> criteria{{1, ac1}, {2, ac2}, {3, ac3},  {4, ac4},
                                                          {5, ac5}, {6, ac6}, {7, ac7},  {8, ac8},
                                                          {9, ac9}, {10, ac10}, {11, ac11}};
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    try {
      const int n = std::stoi(argv[i]);
      if (!criteria.count(n)) throw std::out_of_range("no such criterion");
      selected.push_back(n);
    } catch (const std::exception&) {
      std::cerr << "unknown criterion '" << argv[i] << "'\n";
      return 2;
    }
  }
  if (selected.empty()) {
    for (const auto& [n, f] : criteria) selected.push_back(n);
  }
  bool all = true;
  for (int n : selected) {
    Outcome o;
    try {
      o = criteria.at(n)();
    } catch (const std::exception& e) {
      o = Outcome{false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::cout << "AC" << n << (o.pass ? " PASS " : " FAIL ") << o.detail << std::endl;
  }
  return all ? 0 : 1;
}
