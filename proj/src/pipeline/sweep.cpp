#include "instgen/pipeline/sweep.hpp"

#include "instgen/util/rng.hpp"

#include <spdlog/spdlog.h>

#include <atomic>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

namespace instgen::pipeline {

CumulativeCurve cumulative_curve(const std::vector<tptp::SolutionRecord>& records, int runs)
{
  CumulativeCurve c;
  std::vector<std::set<std::string>> per_run(static_cast<std::size_t>(std::max(runs, 0)));
  for (const auto& r : records) {
    if (!r.run || *r.run < 0 || *r.run >= runs || r.status != tptp::SolverStatus::unsat) { continue; }
    per_run[static_cast<std::size_t>(*r.run)].insert(r.problem);
  }
  std::set<std::string> seen;
  for (const auto& s : per_run) {
    c.solved.push_back(s.size());
    seen.insert(s.begin(), s.end());
    c.cumulative.push_back(seen.size());
  }
  return c;
}

nlohmann::ordered_json SweepReport::to_json() const
{
  return { { "runs", curve.solved.size() },
           { "solved_per_run", curve.solved },
           { "cumulative", curve.cumulative },
           { "attempts", attempts },
           { "resumed_runs", resumed },
           { "max_instances_per_input", max_instances_per_input },
           { "skipped", skipped },
           { "errors", errors } };
}

std::vector<AttemptOutcome> run_attempts(const std::vector<const tptp::Problem*>& problems,
                                         inst::Policy& policy,
                                         const AttemptConfig& config,
                                         std::size_t jobs,
                                         const std::function<std::uint64_t(const tptp::Problem&)>& seed_of)
{
  std::vector<AttemptOutcome> out(problems.size());
  std::atomic<std::size_t> next{ 0 };
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const auto k = next.fetch_add(1);
      if (k >= problems.size()) { return; }
      try {
        out[k] = run_attempt(*problems[k], policy, config, seed_of(*problems[k]));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) { failure = std::current_exception(); }
        next = problems.size();
        return;
      }
    }
  };
  const auto threads_wanted = std::max<std::size_t>(1, std::min(jobs, problems.size()));
  if (threads_wanted == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t j = 0; j < threads_wanted; ++j) { threads.emplace_back(worker); }
    for (auto& t : threads) { t.join(); }
  }
  if (failure) { std::rethrow_exception(failure); }
  return out;
}

SweepReport sweep(const std::vector<tptp::Problem>& problems,
                  inst::Policy& policy,
                  const SweepConfig& config,
                  const tptp::SolutionStore& store)
{
  SweepReport report;
  const auto bound = inst::instance_bound(config.attempt.passes);
  std::set<std::string> names;
  for (const auto& p : problems) { names.insert(p.name); }
  std::vector<tptp::SolutionRecord> existing;
  std::set<std::pair<std::string, int>> done;
  for (auto& r : store.recover()) {
    if (!r.run || !names.contains(r.problem)) { continue; }
    done.emplace(r.problem, *r.run);
    existing.push_back(std::move(r));
  }

  for (int run = 0; run < config.runs; ++run) {
    std::vector<const tptp::Problem*> todo;
    for (const auto& p : problems) {
      if (!done.contains({ p.name, run })) { todo.push_back(&p); }
    }
    if (todo.empty()) {
      ++report.resumed;
      continue;
    }
    auto outcomes = run_attempts(todo, policy, config.attempt, config.jobs, [&](const tptp::Problem& p) {
      return attempt_seed(config.base_seed, p.name, static_cast<std::uint64_t>(run));
    });
    std::vector<tptp::SolutionRecord> batch;
    for (auto& o : outcomes) {
      if (o.max_instances_per_input > bound) {
        throw InstanceBoundViolation(o.record.problem + ": " + std::to_string(o.max_instances_per_input)
                                     + " ground instances of one clause exceed " + std::to_string(bound));
      }
      report.max_instances_per_input = std::max(report.max_instances_per_input, o.max_instances_per_input);
      report.skipped += o.record.status == tptp::SolverStatus::skipped ? 1 : 0;
      report.errors += o.record.status == tptp::SolverStatus::error ? 1 : 0;
      o.record.run = run;
      o.record.phase = config.phase;
      batch.push_back(std::move(o.record));
    }
    report.attempts += batch.size();
    store.append(batch);
    existing.insert(existing.end(), batch.begin(), batch.end());
    const auto curve = cumulative_curve(existing, run + 1);
    spdlog::info("run {}: solved {} (cumulative {})", run, curve.solved.back(), curve.cumulative.back());
    if (config.on_run) { config.on_run(run, batch); }
  }
  report.curve = cumulative_curve(existing, config.runs);
  return report;
}

}  // namespace instgen::pipeline
