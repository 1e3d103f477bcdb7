#include "cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "reprofile/fifo.hpp"
#include "reprofile/io.hpp"
#include "reprofile/oracle.hpp"
#include "reprofile/scenarios.hpp"
#include "reprofile/staticprio.hpp"

namespace reprofile::cli {

namespace {

std::shared_ptr<spdlog::logger> logger() {
  static std::shared_ptr<spdlog::logger> log = [] {
    auto l = spdlog::stderr_color_mt("reprofile");
    const char* level = std::getenv("REPROFILE_LOG");
    l->set_level(level ? spdlog::level::from_str(level) : spdlog::level::warn);
    return l;
  }();
  return log;
}

// Validation failures carry their own exit code.
struct InvalidScenario : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string describe(const Diagnostic& d) {
  std::string out = d.code + ": " + d.message;
  if (d.flow) out += " (flow " + std::to_string(*d.flow) + ")";
  if (d.link) out += " (link " + std::to_string(*d.link) + ")";
  return out;
}

void require_valid(const Scenario& s) {
  if (auto d = validate(s)) throw InvalidScenario(describe(*d));
}

Scenario load_scenario(const std::string& path) {
  Scenario s;
  try {
    s = io::read_scenario(path);
  } catch (const io::FormatError& e) {
    throw InvalidScenario(e.what());
  }
  require_valid(s);
  return s;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw CLI::ValidationError("list", "bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// lo:hi:count[:log]
std::vector<double> parse_range(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() < 3 || parts.size() > 4) throw CLI::ValidationError("--range", "expected lo:hi:count[:log]");
  const double lo = std::stod(parts[0]);
  const double hi = std::stod(parts[1]);
  const int count = std::stoi(parts[2]);
  const bool log = parts.size() == 4 && parts[3] == "log";
  if (count < 1) throw CLI::ValidationError("--range", "count must be >= 1");
  if (log && !(lo > 0.0 && hi > 0.0)) throw CLI::ValidationError("--range", "log range needs positive ends");
  std::vector<double> out;
  for (int k = 0; k < count; ++k) {
    const double f = count == 1 ? 0.0 : static_cast<double>(k) / (count - 1);
    out.push_back(log ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f);
  }
  return out;
}

std::string number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return fmt::format("{}", v);
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

scenarios::TrafficModel load_model(const std::string& spec) {
  if (spec == "tsn" || spec == "interdc" || spec == "synthetic") {
    return scenarios::TrafficModel::of(scenarios::model_kind_from_string(spec));
  }
  try {
    return io::read_model(spec);
  } catch (const io::FormatError& e) {
    throw InvalidScenario(e.what());
  }
}

struct Generator {
  std::string kind = "parking-lot";
  std::size_t m = 20;
  std::size_t n = 3;
  std::optional<std::size_t> cross;
  std::string model = "synthetic";
  std::string topology;
  std::size_t count = 50;

  void add_options(CLI::App* app) {
    app->add_option("--kind", kind, "parking-lot | graph")->check(CLI::IsMember({"parking-lot", "graph"}));
    app->add_option("--m", m, "main flows (parking lot)");
    app->add_option("--n", n, "links (parking lot)")->check(CLI::PositiveNumber);
    app->add_option("--cross", cross, "cross flows per link (default m)");
    app->add_option("--model", model, "tsn | interdc | synthetic | model JSON file");
    app->add_option("--topology", topology, "topology JSON file (graph kind)");
    app->add_option("--count", count, "flows (graph kind)");
  }

  Scenario make(std::uint64_t seed, Scheduler scheduler) const {
    const scenarios::TrafficModel tm = load_model(model);
    if (kind == "graph") {
      if (topology.empty()) throw CLI::ValidationError("--topology", "graph kind needs --topology");
      scenarios::Graph g;
      try {
        g = io::read_graph(topology);
      } catch (const io::FormatError& e) {
        throw InvalidScenario(e.what());
      }
      return scenarios::graph_scenario(g, tm, count, seed, scheduler);
    }
    return scenarios::gen_parking_lot(m, n, cross, tm, seed, scheduler);
  }
};

Scheduler parse_scheduler(const std::string& name, int classes) {
  if (name == "fifo") return Scheduler::fifo();
  return Scheduler::static_priority(classes);
}

struct Row {
  std::size_t instance = 0;
  std::uint64_t seed = 0;
  std::string scheduler;
  int classes = 1;
  std::string strategy;
  double total = 0.0;
  double runtime_ms = 0.0;
};

Row timed_solve(const Scenario& s, const SolveOptions& options, bool timing) {
  Row row;
  row.scheduler = s.scheduler.kind == SchedulerKind::Fifo ? "fifo" : "sp";
  row.classes = s.scheduler.class_count();
  row.strategy = options.strategy;
  const auto start = std::chrono::steady_clock::now();
  try {
    NetworkSolution sol = solve(s, options);
    row.total = check_solution(s, sol).feasible ? sol.total : kInfinity;
  } catch (const std::exception& e) {
    logger()->warn("{} failed: {}", options.strategy, e.what());
    row.total = kInfinity;
  }
  if (timing) {
    row.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return row;
}

template <class Work>
void parallel_for(std::size_t count, unsigned jobs, Work&& work) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) work(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (unsigned t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < count;) {
        try {
          work(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

std::string rows_csv(const std::vector<Row>& rows) {
  std::string out = "instance_id,seed,scheduler,classes,strategy,total_mbps,runtime_ms\n";
  for (const Row& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{}\n", r.instance, r.seed, r.scheduler, r.classes, r.strategy,
                       number(r.total), number(r.runtime_ms));
  }
  return out;
}

// Mean relative improvement (baseline - strategy) / baseline with a 95%
// normal-approximation confidence interval, over instances where both are finite.
std::string summary_csv(const std::vector<Row>& rows, const std::vector<std::string>& strategies) {
  std::map<std::pair<std::size_t, std::string>, double> total;
  std::size_t instances = 0;
  for (const Row& r : rows) {
    total[{r.instance, r.strategy}] = r.total;
    instances = std::max(instances, r.instance + 1);
  }
  std::string out = "baseline,strategy,count,mean_improvement,ci95_low,ci95_high\n";
  for (const std::string& base : strategies) {
    for (const std::string& strat : strategies) {
      if (base == strat) continue;
      std::vector<double> v;
      for (std::size_t i = 0; i < instances; ++i) {
        const auto b = total.find({i, base});
        const auto c = total.find({i, strat});
        if (b == total.end() || c == total.end()) continue;
        if (!std::isfinite(b->second) || !std::isfinite(c->second) || b->second <= 0.0) continue;
        v.push_back((b->second - c->second) / b->second);
      }
      double mean = 0.0, half = 0.0;
      if (!v.empty()) {
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        if (v.size() > 1) {
          double ss = 0.0;
          for (double x : v) ss += (x - mean) * (x - mean);
          half = 1.96 * std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
        }
      }
      out += fmt::format("{},{},{},{},{},{}\n", base, strat, v.size(), number(v.empty() ? NAN : mean),
                         number(v.empty() ? NAN : mean - half), number(v.empty() ? NAN : mean + half));
    }
  }
  return out;
}

struct CommonSolveFlags {
  std::string strategy = "gr";
  std::uint64_t seed = 0;
  std::string gamma_grid;
  int gamma_depth = 2;
  double epsilon = 1e-3;
  std::optional<std::size_t> budget;

  void add_options(CLI::App* app, bool with_strategy) {
    if (with_strategy) {
      app->add_option("--strategy", strategy, "ns | fs | gr | nlp")->check(CLI::IsMember({"ns", "fs", "gr", "nlp"}));
    }
    app->add_option("--seed", seed, "random seed");
    app->add_option("--gamma-grid", gamma_grid, "comma-separated reprofiling ratios for gr");
    app->add_option("--gamma-depth", gamma_depth, "refinement rounds for gr")->check(CLI::NonNegativeNumber);
    app->add_option("--epsilon", epsilon, "adjustment stopping threshold")->check(CLI::NonNegativeNumber);
    app->add_option("--budget", budget, "orderings tried by nlp");
  }

  SolveOptions options() const {
    SolveOptions o;
    o.strategy = strategy;
    o.seed = seed;
    o.gamma_grid = parse_list(gamma_grid);
    o.gamma_depth = gamma_depth;
    o.epsilon = epsilon;
    o.budget = budget;
    return o;
  }
};

int cmd_solve(const std::string& file, const std::string& scheduler, std::optional<int> classes,
              const SolveOptions& options, bool with_oracle, bool timing, const std::string& output,
              std::ostream& out, std::ostream& err) {
  Scenario s = with_scheduler(load_scenario(file), scheduler, classes);
  require_valid(s);
  const auto start = std::chrono::steady_clock::now();
  NetworkSolution sol = solve(s, options);
  const double elapsed =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  const SolutionCheck check = check_solution(s, sol);
  logger()->info("solved {} with {}: total {} Mb/s", file, options.strategy, sol.total);

  nlohmann::ordered_json result = io::solution_to_json(s, sol, {check.feasible, timing ? elapsed : 0.0});
  if (with_oracle) {
    nlohmann::ordered_json o;
    nlohmann::ordered_json links = nlohmann::ordered_json::array();
    for (const LinkPlan& plan : sol.links) {
      std::vector<oracle::OracleFlow> flows;
      for (std::size_t k = 0; k < plan.flows.size(); ++k) {
        const FlowSpec& f = s.flows[plan.flows[k]];
        flows.push_back({f.profile.rate, f.profile.burst,
                         sol.shaping_delays[static_cast<Eigen::Index>(plan.flows[k])], plan.assignment.class_of[k]});
      }
      const double c = oracle::dense_link_rate(flows, plan.class_deadlines);
      links.push_back(std::isfinite(c) ? nlohmann::ordered_json(c) : nlohmann::ordered_json(nullptr));
    }
    o["link_c_mbps"] = std::move(links);
    if (s.scheduler.kind == SchedulerKind::Fifo) {
      try {
        const oracle::GridResult g = oracle::grid_min_bandwidth_fifo(s);
        o["min_total_mbps"] = g.feasible ? nlohmann::ordered_json(g.total) : nlohmann::ordered_json(nullptr);
        o["min_feasible"] = g.feasible;
      } catch (const oracle::OracleRefused& e) {
        err << "oracle refused: " << e.what() << "\n";
        return kOracleRefused;
      }
    }
    result["oracle"] = std::move(o);
  }
  write_text(output, io::dump(result), out);
  return kOk;
}

}  // namespace

Scenario with_scheduler(Scenario s, const std::string& scheduler, std::optional<int> classes) {
  if (scheduler == "fifo") {
    s.scheduler = Scheduler::fifo();
  } else if (scheduler == "sp") {
    s.scheduler = Scheduler::static_priority(classes.value_or(
        s.scheduler.kind == SchedulerKind::StaticPriority ? s.scheduler.classes : 1));
  } else if (classes) {
    s.scheduler = Scheduler::static_priority(*classes);
  }
  return s;
}

NetworkSolution solve(const Scenario& s, const SolveOptions& options) {
  const bool fifo_sched = s.scheduler.kind == SchedulerKind::Fifo;
  if (options.strategy == "fs") return fifo_sched ? fifo::fs_solve(s).to_network(s) : sp::sp_fs_solve(s);
  if (options.strategy == "ns") return fifo_sched ? fifo::ns_solve(s).to_network(s) : sp::sp_ns_solve(s);
  if (options.strategy == "nlp") {
    if (!fifo_sched) throw std::invalid_argument("nlp strategy needs the FIFO scheduler");
    const std::size_t budget = options.budget.value_or(fifo::default_search_budget(s.flows.size()));
    fifo::NlpOptions nlp;
    nlp.seed = options.seed;
    return fifo::randomized_search(s, budget, options.seed, nlp).to_network(s);
  }
  if (options.strategy == "gr") {
    sp::GammaSchedule schedule;
    if (!options.gamma_grid.empty()) schedule.grid = options.gamma_grid;
    schedule.depth = options.gamma_depth;
    return sp::greedy_reprofiling(s, schedule, options.epsilon).solution;
  }
  throw std::invalid_argument("unknown strategy '" + options.strategy + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bandwidth provisioning with traffic reprofiling"};
  app.require_subcommand(1);

  // solve
  CLI::App* solve_cmd = app.add_subcommand("solve", "solve one scenario and emit a JSON result");
  std::string scenario_file, solve_out, sched_name;
  std::optional<int> classes;
  bool with_oracle = false, timing = false;
  CommonSolveFlags solve_flags;
  solve_cmd->add_option("scenario", scenario_file, "scenario JSON")->required();
  solve_cmd->add_option("--scheduler", sched_name, "fifo | sp (default: from scenario)")->check(CLI::IsMember({"fifo", "sp"}));
  solve_cmd->add_option("--classes", classes, "priority classes for sp")->check(CLI::PositiveNumber);
  solve_cmd->add_flag("--oracle", with_oracle, "cross-check with the brute-force references");
  solve_cmd->add_flag("--timing", timing, "report wall-clock runtime (output no longer byte-stable)");
  solve_cmd->add_option("-o,--output", solve_out, "result file (default stdout)");
  solve_flags.add_options(solve_cmd, true);

  // compare
  CLI::App* compare_cmd = app.add_subcommand("compare", "run strategies over many instances, emit CSV");
  Generator cmp_gen;
  std::string cmp_dir, cmp_strategies = "fs,ns,gr", cmp_out, cmp_summary, cmp_sched = "fifo";
  int cmp_classes = 1;
  std::size_t repeats = 10;
  unsigned jobs = 1;
  bool cmp_timing = false;
  CommonSolveFlags cmp_flags;
  compare_cmd->add_option("--scenario-dir", cmp_dir, "directory of scenario JSON files (instead of a generator)");
  cmp_gen.add_options(compare_cmd);
  compare_cmd->add_option("--strategies", cmp_strategies, "comma-separated strategies");
  compare_cmd->add_option("--repeats", repeats, "generated instances");
  compare_cmd->add_option("--scheduler", cmp_sched, "fifo | sp")->check(CLI::IsMember({"fifo", "sp"}));
  compare_cmd->add_option("--classes", cmp_classes, "priority classes for sp")->check(CLI::PositiveNumber);
  compare_cmd->add_option("--jobs", jobs, "parallel instances");
  compare_cmd->add_flag("--timing", cmp_timing, "record runtimes");
  compare_cmd->add_option("-o,--output", cmp_out, "rows CSV (default stdout)");
  compare_cmd->add_option("--summary", cmp_summary, "summary CSV path");
  cmp_flags.add_options(compare_cmd, false);

  // sweep
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "vary gamma, omega or classes, emit CSV");
  Generator sw_gen;
  std::string param, values, range, sw_base, sw_strategies = "fs,gr", sw_out, sw_sched;
  std::optional<int> sw_classes;
  bool sw_timing = false;
  unsigned sw_jobs = 1;
  CommonSolveFlags sw_flags;
  sweep_cmd->add_option("--param", param, "gamma | omega | classes")->required()->check(CLI::IsMember({"gamma", "omega", "classes"}));
  sweep_cmd->add_option("--values", values, "comma-separated values");
  sweep_cmd->add_option("--range", range, "lo:hi:count[:log]");
  sweep_cmd->add_option("--base", sw_base, "base scenario JSON (default: generated)");
  sw_gen.add_options(sweep_cmd);
  sweep_cmd->add_option("--strategies", sw_strategies, "comma-separated strategies");
  sweep_cmd->add_option("--scheduler", sw_sched, "fifo | sp")->check(CLI::IsMember({"fifo", "sp"}));
  sweep_cmd->add_option("--classes", sw_classes, "priority classes for sp")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--jobs", sw_jobs, "parallel points");
  sweep_cmd->add_flag("--timing", sw_timing, "record runtimes");
  sweep_cmd->add_option("-o,--output", sw_out, "CSV (default stdout)");
  sw_flags.add_options(sweep_cmd, false);

  // generate
  CLI::App* gen_cmd = app.add_subcommand("generate", "write a generated scenario as JSON");
  Generator gen;
  std::string gen_out, gen_sched = "fifo";
  int gen_classes = 1;
  std::uint64_t gen_seed = 0;
  double omega = 1.0;
  gen.add_options(gen_cmd);
  gen_cmd->add_option("--seed", gen_seed, "random seed");
  gen_cmd->add_option("--scheduler", gen_sched, "fifo | sp")->check(CLI::IsMember({"fifo", "sp"}));
  gen_cmd->add_option("--classes", gen_classes, "priority classes for sp")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--omega", omega, "deadline scaling factor")->check(CLI::PositiveNumber);
  gen_cmd->add_option("-o,--output", gen_out, "scenario file (default stdout)");

  std::vector<std::string> argv_store{"reprofile"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << e.what() << "\n" << "run with --help for usage\n";
    return kUsage;
  }

  try {
    if (*solve_cmd) {
      if (sched_name.empty() && classes) sched_name = "sp";
      return cmd_solve(scenario_file, sched_name, classes, solve_flags.options(), with_oracle, timing, solve_out, out,
                       err);
    }

    if (*compare_cmd) {
      const std::vector<std::string> strategies = split_names(cmp_strategies);
      for (const auto& st : strategies) {
        if (st != "fs" && st != "ns" && st != "gr" && st != "nlp") throw CLI::ValidationError("--strategies", "unknown strategy " + st);
      }
      std::vector<Scenario> instances;
      std::vector<std::uint64_t> seeds;
      const Scheduler sched = parse_scheduler(cmp_sched, cmp_classes);
      if (!cmp_dir.empty()) {
        std::vector<std::filesystem::path> files;
        for (const auto& e : std::filesystem::directory_iterator(cmp_dir)) {
          if (e.path().extension() == ".json") files.push_back(e.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
          Scenario s = load_scenario(f.string());
          s.scheduler = sched;
          instances.push_back(std::move(s));
          seeds.push_back(cmp_flags.seed);
        }
      } else {
        for (std::size_t r = 0; r < repeats; ++r) {
          seeds.push_back(cmp_flags.seed + r);
          instances.push_back(cmp_gen.make(seeds.back(), sched));
          require_valid(instances.back());
        }
      }
      std::vector<std::vector<Row>> per_instance(instances.size());
      parallel_for(instances.size(), jobs, [&](std::size_t i) {
        for (const std::string& st : strategies) {
          SolveOptions o = cmp_flags.options();
          o.strategy = st;
          o.seed = seeds[i];
          Row row = timed_solve(instances[i], o, cmp_timing);
          row.instance = i;
          row.seed = seeds[i];
          per_instance[i].push_back(std::move(row));
        }
      });
      std::vector<Row> rows;
      for (auto& v : per_instance) rows.insert(rows.end(), v.begin(), v.end());
      write_text(cmp_out, rows_csv(rows), out);
      if (!cmp_summary.empty()) write_text(cmp_summary, summary_csv(rows, strategies), out);
      return kOk;
    }

    if (*sweep_cmd) {
      std::vector<double> points = !values.empty() ? parse_list(values) : std::vector<double>{};
      if (!range.empty()) {
        const auto r = parse_range(range);
        points.insert(points.end(), r.begin(), r.end());
      }
      if (points.empty()) throw CLI::ValidationError("sweep", "give --values or --range");
      Scenario base = sw_base.empty() ? sw_gen.make(sw_flags.seed, Scheduler::fifo()) : load_scenario(sw_base);
      base = with_scheduler(std::move(base), sw_sched, sw_classes);
      require_valid(base);
      const std::vector<std::string> strategies = split_names(sw_strategies);
      std::vector<std::vector<std::string>> lines(points.size());
      parallel_for(points.size(), sw_jobs, [&](std::size_t p) {
        const double v = points[p];
        Scenario s = base;
        if (param == "omega") {
          if (!(v > 0.0)) throw CLI::ValidationError("--range", "omega must be positive");
          s = scenarios::scale_deadlines(base, v);
        } else if (param == "classes") {
          if (v < 1.0 || v != std::floor(v)) throw CLI::ValidationError("--range", "classes must be positive integers");
          s.scheduler = Scheduler::static_priority(static_cast<int>(v));
        } else if (v < 0.0 || v > 1.0) {
          throw CLI::ValidationError("--range", "gamma must lie in [0, 1]");
        }
        for (const std::string& st : strategies) {
          SolveOptions o = sw_flags.options();
          o.strategy = st;
          if (param == "gamma") {
            o.gamma_grid = {v};
            o.gamma_depth = 0;
          }
          const Row row = timed_solve(s, o, sw_timing);
          lines[p].push_back(fmt::format("{},{},{},{},{}\n", param, number(v), st, number(row.total), number(row.runtime_ms)));
        }
      });
      std::string csv = "param,value,strategy,total_mbps,runtime_ms\n";
      for (const auto& l : lines) {
        for (const auto& s : l) csv += s;
      }
      write_text(sw_out, csv, out);
      return kOk;
    }

    if (*gen_cmd) {
      Scenario s = gen.make(gen_seed, parse_scheduler(gen_sched, gen_classes));
      if (omega != 1.0) s = scenarios::scale_deadlines(s, omega);
      require_valid(s);
      write_text(gen_out, io::dump(io::scenario_to_json(s)), out);
      return kOk;
    }
  } catch (const InvalidScenario& e) {
    err << "invalid scenario: " << e.what() << "\n";
    return kInvalid;
  } catch (const CLI::Error& e) {
    err << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kUsage;
}

}  // namespace reprofile::cli
