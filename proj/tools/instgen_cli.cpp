// instgen: command-line driver for grounding experiments.

#include "instgen/inst/external_policy.hpp"
#include "instgen/inst/grounding.hpp"
#include "instgen/pipeline/attempt.hpp"
#include "instgen/pipeline/coverage.hpp"
#include "instgen/pipeline/loop.hpp"
#include "instgen/pipeline/report.hpp"
#include "instgen/pipeline/split.hpp"
#include "instgen/pipeline/sweep.hpp"
#include "instgen/tptp/cnf.hpp"
#include "instgen/tptp/solution.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <fstream>
#include <iostream>

using json = nlohmann::ordered_json;
using namespace instgen;

namespace {

struct PolicyOptions
{
  std::string kind = "random";
  std::string endpoint;
  double timeout_s = 120.0;

  void attach(CLI::App& app)
  {
    app.add_option("--policy", kind, "random or external")->check(CLI::IsMember({ "random", "external" }));
    app.add_option("--endpoint", endpoint,
                   std::string("tcp://host:port, unix://path or exec:command; defaults to $") + inst::endpoint_env_var);
    app.add_option("--policy-timeout", timeout_s, "seconds to wait for a policy answer");
  }

  [[nodiscard]] inst::Endpoint resolve_endpoint() const
  {
    if (!endpoint.empty()) { return inst::Endpoint::parse(endpoint); }
    if (auto e = inst::endpoint_from_env()) { return *e; }
    throw CLI::ValidationError("--endpoint", std::string("no endpoint given and $") + inst::endpoint_env_var + " is unset");
  }

  [[nodiscard]] std::unique_ptr<inst::Policy> make() const
  {
    if (kind == "random") { return std::make_unique<inst::RandomPolicy>(); }
    return std::make_unique<inst::ExternalPolicy>(resolve_endpoint(), timeout_s);
  }
};

// Parses "30", "30s", "1.5s" or "2m".
double parse_seconds(const std::string& text)
{
  std::size_t used = 0;
  double value = std::stod(text, &used);
  const auto unit = text.substr(used);
  if (unit.empty() || unit == "s") { return value; }
  if (unit == "m") { return value * 60.0; }
  if (unit == "ms") { return value / 1000.0; }
  throw CLI::ValidationError("budget", "unknown time unit '" + unit + "'");
}

struct AttemptOptions
{
  std::string budget = "30s";
  std::vector<std::size_t> samples{ 25, 5 };
  std::string constants_only = "auto";
  bool no_minimize = false;

  void attach(CLI::App& app)
  {
    app.add_option("--budget", budget, "ground solving budget per attempt, e.g. 30s");
    app.add_option("--samples", samples, "samples on level 0 and level 1")->delimiter(',')->expected(2);
    app.add_option("--constants-only", constants_only, "force constants in the second pass: auto, yes or no")
      ->check(CLI::IsMember({ "auto", "yes", "no" }));
    app.add_flag("--no-minimize", no_minimize, "keep the solver's core unminimized");
  }

  [[nodiscard]] pipeline::AttemptConfig make() const
  {
    pipeline::AttemptConfig c;
    c.budget_s = parse_seconds(budget);
    c.passes.level0_samples = samples.at(0);
    c.passes.level1_samples = samples.at(1);
    if (constants_only != "auto") { c.passes.grounding_pass_constants_only = constants_only == "yes"; }
    c.minimize = !no_minimize;
    return c;
  }
};

void print(const json& j, bool pretty)
{
  std::cout << (pretty ? j.dump(2) : j.dump()) << "\n";
}

std::vector<tptp::Problem> load_dir(const std::string& dir)
{
  auto problems = tptp::load_problems(dir);
  if (problems.empty()) { throw std::runtime_error("no .p files under " + dir); }
  return problems;
}

std::vector<tptp::SolutionRecord> load_store(const std::string& path)
{
  return tptp::SolutionStore(path).load();
}

}  // namespace

int main(int argc, char** argv)
{
  auto log = spdlog::stderr_color_mt("instgen");
  spdlog::set_default_logger(log);
  spdlog::set_level(spdlog::level::warn);

  CLI::App app{ "Instantiation-based grounding and ground solving for first-order CNF problems" };
  app.require_subcommand(1);
  app.fallthrough();
  bool pretty = false;
  bool verbose = false;
  app.add_flag("--pretty", pretty, "indent JSON output");
  app.add_flag("-v,--verbose", verbose, "log progress to stderr");

  // solve
  auto* solve = app.add_subcommand("solve", "ground and decide one problem");
  std::string solve_file;
  std::uint64_t solve_seed = 0;
  int solve_runs = 1;
  std::string solve_store;
  PolicyOptions solve_policy;
  AttemptOptions solve_attempt;
  solve->add_option("file", solve_file, "TPTP CNF file")->required()->check(CLI::ExistingFile);
  solve->add_option("--seed", solve_seed, "base seed; run r uses a seed derived from it, the problem name and r");
  solve->add_option("--runs", solve_runs, "attempts to make; stops at the first unsat")->check(CLI::PositiveNumber);
  solve->add_option("--store", solve_store, "append records to this solution store");
  solve_policy.attach(*solve);
  solve_attempt.attach(*solve);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "seeded passes over a directory of problems");
  std::string sweep_dir;
  std::string sweep_store;
  std::string sweep_report_dir;
  int sweep_runs = 1;
  std::uint64_t sweep_seed = 0;
  std::size_t sweep_jobs = 1;
  PolicyOptions sweep_policy;
  AttemptOptions sweep_attempt;
  sweep->add_option("dir", sweep_dir, "directory of .p files")->required()->check(CLI::ExistingDirectory);
  sweep->add_option("--runs", sweep_runs)->check(CLI::PositiveNumber);
  sweep->add_option("--store", sweep_store, "solution store; existing runs are resumed")->required();
  sweep->add_option("--seed", sweep_seed);
  sweep->add_option("--jobs", sweep_jobs, "parallel attempts")->check(CLI::PositiveNumber);
  sweep->add_option("--report-dir", sweep_report_dir, "also write report tables and plot here");
  sweep_policy.attach(*sweep);
  sweep_attempt.attach(*sweep);

  // split
  auto* split = app.add_subcommand("split", "family-level train/dev/test split");
  std::string split_dir;
  std::uint64_t split_seed = 0;
  std::string split_out;
  split->add_option("dir", split_dir)->required()->check(CLI::ExistingDirectory);
  split->add_option("--seed", split_seed);
  split->add_option("--out", split_out, "write the split JSON here as well");

  // loop
  auto* loop = app.add_subcommand("loop", "self-improvement loop against an external policy");
  std::string loop_dir;
  std::string loop_split;
  std::string loop_workdir = "loop";
  pipeline::LoopConfig loop_cfg;
  int loop_iterations = 1;
  PolicyOptions loop_policy;
  AttemptOptions loop_attempt;
  loop->add_option("dir", loop_dir, "directory of .p files")->required()->check(CLI::ExistingDirectory);
  loop->add_option("--split", loop_split, "split JSON from the split verb")->required()->check(CLI::ExistingFile);
  loop->add_option("--workdir", loop_workdir, "state, stores and train log live here");
  loop->add_option("--attempts", loop_cfg.attempts_per_iter, "training problems attempted per iteration");
  loop->add_option("--train-samples", loop_cfg.train_samples_per_iter, "stored proofs sent to train per iteration");
  loop->add_option("--train-steps", loop_cfg.train_steps, "steps requested from the train verb");
  loop->add_option("--eval-every", loop_cfg.eval_every, "test-set evaluation period in iterations");
  loop->add_option("--iterations", loop_iterations, "iterations to run in this invocation")->check(CLI::NonNegativeNumber);
  loop->add_option("--seed", loop_cfg.seed);
  loop->add_option("--jobs", loop_cfg.jobs)->check(CLI::PositiveNumber);
  loop->add_flag("--restart-fresh-model", loop_cfg.restart_fresh_model, "reinitialize the model, keep all solutions");
  loop_policy.attach(*loop);
  loop_attempt.attach(*loop);

  // coverage
  auto* coverage = app.add_subcommand("coverage", "how many reference instantiations a policy proposes");
  std::string cov_store;
  std::string cov_dir;
  std::string cov_csv;
  std::vector<std::size_t> cov_grid = pipeline::default_coverage_grid;
  std::uint64_t cov_seed = 0;
  PolicyOptions cov_policy;
  coverage->add_option("--store", cov_store, "store with reference solutions")->required()->check(CLI::ExistingFile);
  coverage->add_option("--corpus", cov_dir, "directory with the referenced problems")->required()->check(CLI::ExistingDirectory);
  coverage->add_option("--grid", cov_grid, "sample counts")->delimiter(',');
  coverage->add_option("--seed", cov_seed);
  coverage->add_option("--csv", cov_csv, "also write the table as CSV");
  cov_policy.attach(*coverage);

  // report
  auto* report = app.add_subcommand("report", "cumulative tables and plot from a store");
  std::string rep_store;
  std::string rep_out;
  std::string rep_phase;
  report->add_option("--store", rep_store)->required()->check(CLI::ExistingFile);
  report->add_option("--out", rep_out, "directory for CSV tables and the SVG plot");
  report->add_option("--phase", rep_phase, "only records of this phase (train or eval)");

  CLI11_PARSE(app, argc, argv);
  if (verbose) { spdlog::set_level(spdlog::level::info); }

  try {
    if (*solve) {
      const auto problem = tptp::load_problem(solve_file);
      auto policy = solve_policy.make();
      const auto cfg = solve_attempt.make();
      std::optional<tptp::SolutionStore> store;
      if (!solve_store.empty()) { store.emplace(solve_store); }
      json attempts = json::array();
      int code = 1;
      for (int run = 0; run < solve_runs; ++run) {
        auto outcome = pipeline::run_attempt(problem, *policy, cfg,
                                             attempt_seed(solve_seed, problem.name, static_cast<std::uint64_t>(run)));
        outcome.record.run = run;
        if (store) { store->append(outcome.record); }
        auto j = json::parse(tptp::write_solution(outcome.record));
        j["ground_clauses"] = outcome.ground_clauses;
        j["max_instances_per_input"] = outcome.max_instances_per_input;
        attempts.push_back(std::move(j));
        if (outcome.record.status == tptp::SolverStatus::unsat) {
          code = 0;
          break;
        }
      }
      print(solve_runs == 1 ? attempts[0] : json{ { "attempts", attempts } }, pretty);
      return code;
    }

    if (*sweep) {
      const auto problems = load_dir(sweep_dir);
      auto policy = sweep_policy.make();
      pipeline::SweepConfig cfg;
      cfg.runs = sweep_runs;
      cfg.base_seed = sweep_seed;
      cfg.jobs = sweep_jobs;
      cfg.attempt = sweep_attempt.make();
      const tptp::SolutionStore store(sweep_store);
      const auto rep = pipeline::sweep(problems, *policy, cfg, store);
      auto j = rep.to_json();
      j["problems"] = problems.size();
      j["store"] = sweep_store;
      if (!sweep_report_dir.empty()) {
        json files = json::array();
        for (const auto& f : pipeline::write_report_files(pipeline::build_report(store.load()), sweep_report_dir)) {
          files.push_back(f.string());
        }
        j["files"] = files;
      }
      print(j, pretty);
      return 0;
    }

    if (*split) {
      const auto s = pipeline::split_dataset(load_dir(split_dir), split_seed);
      const auto j = s.to_json();
      if (!split_out.empty()) { std::ofstream(split_out) << j.dump(2) << "\n"; }
      print(j, pretty);
      return 0;
    }

    if (*loop) {
      const auto problems = load_dir(loop_dir);
      std::ifstream in(loop_split);
      const auto s = pipeline::DatasetSplit::from_json(json::parse(in));
      if (loop_policy.kind != "external") {
        throw CLI::ValidationError("--policy", "the loop needs an external policy with a train verb");
      }
      inst::ExternalPolicy policy(loop_policy.resolve_endpoint(), loop_policy.timeout_s);
      std::filesystem::create_directories(loop_workdir);
      const std::filesystem::path wd(loop_workdir);
      const pipeline::LoopFiles files{ wd / "state.json", wd / "train.jsonl", wd / "eval.jsonl", wd / "train_log.tsv" };
      loop_cfg.attempt = loop_attempt.make();
      loop_cfg.until_iteration = pipeline::LoopState::load(files.state).iteration + loop_iterations;
      try {
        const auto state = pipeline::self_improve_loop(problems, s, policy, loop_cfg, files);
        print(state.to_json(), pretty);
        return 0;
      } catch (const pipeline::LoopInterrupted& e) {
        spdlog::error("{}", e.what());
        print(json{ { "interrupted", true }, { "reason", e.what() }, { "state", files.state.string() } }, pretty);
        return 3;
      }
    }

    if (*coverage) {
      const auto problems = load_dir(cov_dir);
      std::map<std::string, const tptp::Problem*> by_name;
      for (const auto& p : problems) { by_name.emplace(p.name, &p); }
      auto policy = cov_policy.make();
      const auto table = pipeline::coverage_eval(by_name, load_store(cov_store), *policy, cov_grid, cov_seed);
      if (!cov_csv.empty()) { std::ofstream(cov_csv) << table.to_csv(); }
      print(table.to_json(), pretty);
      return 0;
    }

    if (*report) {
      const auto rep = pipeline::build_report(load_store(rep_store), rep_phase);
      auto j = rep.to_json();
      if (!rep_out.empty()) {
        json files = json::array();
        for (const auto& f : pipeline::write_report_files(rep, rep_out)) { files.push_back(f.string()); }
        j["files"] = files;
      }
      print(j, pretty);
      return 0;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    print(json{ { "error", e.what() } }, pretty);
    return 2;
  }
  return 0;
}
