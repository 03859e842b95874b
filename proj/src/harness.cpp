#include "aoplan/harness.hpp"

#include "aoplan/problems.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace aoplan {

std::string format_double(double d) {
  if (std::isnan(d)) return "nan";
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), d);
  (void)ec;
  return std::string(buf, ptr);
}

double parse_double(const std::string& s) {
  double d = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, d);
  if (ec != std::errc() || ptr != end) throw std::invalid_argument("bad number '" + s + "'");
  return d;
}

const std::vector<std::string>& planner_spec_names() {
  static const std::vector<std::string> names{"ao-rrt", "ao-est", "m-rrt", "m-rrt-prune", "m-est", "m-est-prune"};
  return names;
}

PlannerSpec parse_planner_spec(const std::string& s) {
  if (s == "ao-rrt") return {MetaAlgorithm::Ao, PlannerKind::Rrt};
  if (s == "ao-est") return {MetaAlgorithm::Ao, PlannerKind::Est};
  if (s == "m-rrt") return {MetaAlgorithm::Restart, PlannerKind::Rrt};
  if (s == "m-est") return {MetaAlgorithm::Restart, PlannerKind::Est};
  if (s == "m-rrt-prune") return {MetaAlgorithm::RestartPrune, PlannerKind::Rrt};
  if (s == "m-est-prune") return {MetaAlgorithm::RestartPrune, PlannerKind::Est};
  throw ConfigError("unknown planner '" + s + "'");
}

std::string to_string(const PlannerSpec& p) {
  const std::string k = to_string(p.kind);
  switch (p.algorithm) {
    case MetaAlgorithm::Ao: return "ao-" + k;
    case MetaAlgorithm::Restart: return "m-" + k;
    case MetaAlgorithm::RestartPrune: return "m-" + k + "-prune";
  }
  return k;
}

void RunConfig::validate() const {
  const auto& names = problem_names();
  if (std::find(names.begin(), names.end(), problem) == names.end()) {
    throw ConfigError("unknown problem '" + problem + "'");
  }
  parse_planner_spec(planner);
  if (!(time_limit_s > 0.0)) throw ConfigError("time limit must be positive");
  if (runs < 1) throw ConfigError("runs must be at least 1");
  if (jobs < 1) throw ConfigError("jobs must be at least 1");
  if (!(sample_every_s > 0.0)) throw ConfigError("sample cadence must be positive");
  if (sample_every_iters && *sample_every_iters < 1) throw ConfigError("sample cadence must be positive");
  if (max_iterations && *max_iterations < 1) throw ConfigError("max iterations must be positive");
  if (cost_weight && !(*cost_weight >= 0.0)) throw ConfigError("cost weight must be non-negative");
  try {
    meta_config().planner.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (mx_call_iterations && *mx_call_iterations < 1) throw ConfigError("per-call iteration cap must be positive");
}

MetaConfig RunConfig::meta_config() const {
  MetaConfig m;
  if (cost_weight) m.cost_weight = *cost_weight;
  if (goal_bias) m.planner.goal_bias = *goal_bias;
  if (n_candidates) m.planner.n_candidates = *n_candidates;
  if (control_samples) m.planner.control_samples = *control_samples;
  if (mx_call_iterations) m.mx_call_iterations = *mx_call_iterations;
  return m;
}

Budget RunConfig::budget() const {
  Budget b;
  b.seconds = time_limit_s;
  b.iterations = max_iterations;
  return b;
}

namespace {

// Sample recorder: every improvement plus a fixed cadence in time or iterations.
struct Recorder {
  const RunConfig& cfg;
  TrialRecord& rec;
  Progress last;
  double next_time = 0.0;
  std::int64_t next_iter = 0;

  void push(double wall_s, double best, std::int64_t tree, int meta) {
    rec.samples.push_back(TrialSample{wall_s, best, tree, meta});
  }

  void on_iteration(const Progress& p) {
    last = p;
    if (cfg.sample_every_iters) {
      if (p.planner_iterations >= next_iter) {
        push(p.wall_s, p.best_cost, static_cast<std::int64_t>(p.tree_size), p.meta_iteration);
        next_iter += *cfg.sample_every_iters;
      }
    } else if (p.wall_s >= next_time) {
      push(p.wall_s, p.best_cost, static_cast<std::int64_t>(p.tree_size), p.meta_iteration);
      while (next_time <= p.wall_s) next_time += cfg.sample_every_s;
    }
  }

  void on_solution(const CostEvent& e) {
    push(e.wall_s, e.cost, static_cast<std::int64_t>(last.tree_size), e.iteration + 1);
  }
};

}  // namespace

TrialRecord run_trial(const RunConfig& cfg, std::uint64_t seed) {
  const PlannerSpec spec = parse_planner_spec(cfg.planner);
  std::shared_ptr<const ControlSystem> problem = make_problem(cfg.problem, cfg.fixtures_dir);
  TrialRecord rec;
  rec.problem = cfg.problem;
  rec.planner = cfg.planner;
  rec.seed = seed;
  Recorder recorder{cfg, rec, Progress{}};

  MetaObserver obs;
  obs.on_iteration = [&](const Progress& p) { recorder.on_iteration(p); };
  obs.on_solution = [&](const CostEvent& e) { recorder.on_solution(e); };

  Rng rng(seed);
  const MetaConfig mc = cfg.meta_config();
  MetaResult r;
  switch (spec.algorithm) {
    case MetaAlgorithm::Ao: r = ao_plan(problem, spec.kind, mc, cfg.budget(), rng, obs); break;
    case MetaAlgorithm::Restart: r = m_x_plan(problem, spec.kind, mc, cfg.budget(), false, rng, obs); break;
    case MetaAlgorithm::RestartPrune: r = m_x_plan(problem, spec.kind, mc, cfg.budget(), true, rng, obs); break;
  }
  rec.events = r.cost_sequence;
  rec.planner_iterations = r.planner_iterations;
  rec.final_cost = r.best_cost();
  const Progress& p = recorder.last;
  const double end_s = rec.samples.empty() ? p.wall_s : std::max(p.wall_s, rec.samples.back().wall_s);
  recorder.push(end_s, rec.final_cost, static_cast<std::int64_t>(p.tree_size),
                static_cast<int>(r.cost_sequence.size()));
  return rec;
}

std::vector<TrialRecord> run_benchmark(const RunConfig& cfg) {
  cfg.validate();
  make_problem(cfg.problem, cfg.fixtures_dir);  // fixture errors surface before any trial

  std::vector<TrialRecord> out(static_cast<std::size_t>(cfg.runs));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int i = next++; i < cfg.runs; i = next++) {
      try {
        out[static_cast<std::size_t>(i)] = run_trial(cfg, cfg.base_seed + static_cast<std::uint64_t>(i));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int n_threads = std::min(cfg.jobs, cfg.runs);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

AggregateCurve aggregate(const std::vector<TrialRecord>& records, double t_end, double grid_dt) {
  if (!(grid_dt > 0.0)) throw std::invalid_argument("aggregate: grid spacing must be positive");
  AggregateCurve c;
  const auto n = static_cast<long>(std::floor(t_end / grid_dt + 1e-9));
  std::vector<std::size_t> cursor(records.size(), 0);
  std::vector<double> held(records.size(), kInf);
  for (long k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * grid_dt;
    double sum = 0.0;
    int inc = 0;
    for (std::size_t r = 0; r < records.size(); ++r) {
      const auto& s = records[r].samples;
      while (cursor[r] < s.size() && s[cursor[r]].wall_s <= t) held[r] = s[cursor[r]++].best_cost;
      if (std::isfinite(held[r])) {
        sum += held[r];
        ++inc;
      }
    }
    c.time.push_back(t);
    c.mean_cost.push_back(inc > 0 ? sum / inc : std::numeric_limits<double>::quiet_NaN());
    c.included.push_back(inc);
    c.excluded.push_back(static_cast<int>(records.size()) - inc);
  }
  return c;
}

SolutionCurve aggregate_by_solution(const std::vector<TrialRecord>& records) {
  SolutionCurve c;
  for (const TrialRecord& r : records) {
    for (std::size_t i = 0; i < r.events.size(); ++i) {
      if (c.count.size() <= i) {
        c.mean_cost.push_back(0.0);
        c.mean_wall_s.push_back(0.0);
        c.count.push_back(0);
      }
      c.mean_cost[i] += r.events[i].cost;
      c.mean_wall_s[i] += r.events[i].wall_s;
      ++c.count[i];
    }
  }
  for (std::size_t i = 0; i < c.count.size(); ++i) {
    c.mean_cost[i] /= c.count[i];
    c.mean_wall_s[i] /= c.count[i];
  }
  return c;
}

namespace {

constexpr const char* kCsvHeader = "problem,planner,seed,wall_s,best_cost,tree_size,meta_iter";

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> f;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      f.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  f.push_back(cur);
  return f;
}

template <typename Int>
Int parse_int(const std::string& s) {
  Int v{};
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw std::invalid_argument("bad integer '" + s + "'");
  return v;
}

}  // namespace

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << kCsvHeader << '\n';
  for (const TrialRecord& r : records) {
    double prev_cost = kInf;
    double prev_t = -kInf;
    for (const TrialSample& s : r.samples) {
      if (s.best_cost > prev_cost) throw std::logic_error("trial record: best_cost increased");
      if (s.wall_s < prev_t) throw std::logic_error("trial record: wall time decreased");
      prev_cost = s.best_cost;
      prev_t = s.wall_s;
      out << r.problem << ',' << r.planner << ',' << r.seed << ',' << format_double(s.wall_s) << ','
          << format_double(s.best_cost) << ',' << s.tree_size << ',' << s.meta_iter << '\n';
    }
  }
}

std::vector<TrialRecord> parse_trials_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw std::invalid_argument("trials CSV: bad header");
  std::vector<TrialRecord> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv(line);
    if (f.size() != 7) throw std::invalid_argument("trials CSV line " + std::to_string(line_no) + ": 7 fields expected");
    const auto seed = parse_int<std::uint64_t>(f[2]);
    if (out.empty() || out.back().problem != f[0] || out.back().planner != f[1] || out.back().seed != seed) {
      TrialRecord r;
      r.problem = f[0];
      r.planner = f[1];
      r.seed = seed;
      out.push_back(std::move(r));
    }
    TrialRecord& r = out.back();
    r.samples.push_back(TrialSample{parse_double(f[3]), parse_double(f[4]), parse_int<std::int64_t>(f[5]),
                                    parse_int<int>(f[6])});
    r.final_cost = r.samples.back().best_cost;
  }
  return out;
}

void write_aggregate_csv(std::ostream& out, const AggregateCurve& curve) {
  out << "t,mean_cost,included,excluded\n";
  for (std::size_t i = 0; i < curve.time.size(); ++i) {
    out << format_double(curve.time[i]) << ',' << format_double(curve.mean_cost[i]) << ',' << curve.included[i]
        << ',' << curve.excluded[i] << '\n';
  }
}

void write_solution_csv(std::ostream& out, const SolutionCurve& curve) {
  out << "solution,mean_cost,mean_wall_s,count\n";
  for (std::size_t i = 0; i < curve.count.size(); ++i) {
    out << i << ',' << format_double(curve.mean_cost[i]) << ',' << format_double(curve.mean_wall_s[i]) << ','
        << curve.count[i] << '\n';
  }
}

void write_summary_json(std::ostream& out, const RunConfig& cfg, const std::vector<TrialRecord>& records,
                        const AggregateCurve& curve) {
  std::vector<double> finals;
  std::vector<double> firsts;
  double iters = 0.0;
  for (const TrialRecord& r : records) {
    if (std::isfinite(r.final_cost)) finals.push_back(r.final_cost);
    if (!r.events.empty()) firsts.push_back(r.first_solution_s());
    iters += static_cast<double>(r.planner_iterations);
  }
  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? std::numeric_limits<double>::quiet_NaN() : s / static_cast<double>(v.size());
  };
  const double m = mean(finals);
  double ss = 0.0;
  for (double x : finals) ss += (x - m) * (x - m);
  auto num = [](double d) { return std::isfinite(d) ? nlohmann::json(d) : nlohmann::json(nullptr); };

  nlohmann::json j;
  j["problem"] = cfg.problem;
  j["planner"] = cfg.planner;
  j["runs"] = records.size();
  j["solved_runs"] = finals.size();
  j["mean_final_cost"] = num(m);
  j["std_final_cost"] = num(finals.size() > 1 ? std::sqrt(ss / static_cast<double>(finals.size() - 1)) : 0.0);
  j["mean_first_solution_s"] = num(mean(firsts));
  j["mean_iterations"] = records.empty() ? 0.0 : iters / static_cast<double>(records.size());
  j["cost_weight"] = cfg.meta_config().cost_weight;
  j["time_limit_s"] = cfg.time_limit_s;
  j["grid_dt"] = curve.time.size() > 1 ? curve.time[1] - curve.time[0] : 0.0;
  j["excluded_counts_per_gridpoint"] = curve.excluded;
  out << j.dump(2) << '\n';
}

std::string write_outputs(const RunConfig& cfg, const std::vector<TrialRecord>& records, const std::string& suffix) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  const std::string stem = (fs::path(cfg.out_dir) / (cfg.problem + "_" + cfg.planner + suffix)).string();
  const AggregateCurve curve = aggregate(records, cfg.time_limit_s);
  auto open = [](const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    return f;
  };
  {
    std::ofstream f = open(stem + ".csv");
    write_trials_csv(f, records);
  }
  {
    std::ofstream f = open(stem + "_aggregate.csv");
    write_aggregate_csv(f, curve);
  }
  {
    std::ofstream f = open(stem + "_solutions.csv");
    write_solution_csv(f, aggregate_by_solution(records));
  }
  {
    std::ofstream f = open(stem + "_summary.json");
    write_summary_json(f, cfg, records, curve);
  }
  return stem + ".csv";
}

const std::vector<BoundCurveSet>& bound_curve_sets() {
  static const std::vector<BoundCurveSet> sets{{"easy", 0.04}, {"medium", 0.02}, {"hard", 0.01}};
  return sets;
}

void emit_bound_curves(std::ostream& out, int n) {
  out << "g";
  for (const BoundCurveSet& s : bound_curve_sets()) out << ',' << s.label << "_s";
  out << '\n';
  for (double g : goal_volume_grid(n)) {
    out << format_double(g);
    for (const BoundCurveSet& s : bound_curve_sets()) {
      const EstRuntimeBound b = est_runtime_bound(g, s.alpha_beta, s.alpha_beta);
      out << ',' << format_double(b.expected_samples / kSamplesPerSecond);
    }
    out << '\n';
  }
}

std::vector<std::vector<TrialRecord>> sweep_cost_weights(const RunConfig& cfg, const std::vector<double>& weights) {
  if (weights.empty()) throw ConfigError("sweep needs at least one cost weight");
  std::vector<std::vector<TrialRecord>> all;
  for (double w : weights) {
    RunConfig c = cfg;
    c.cost_weight = w;
    all.push_back(run_benchmark(c));
    write_outputs(c, all.back(), "_wc" + format_double(w));
  }
  return all;
}

}  // namespace aoplan
