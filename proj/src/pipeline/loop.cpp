#include "instgen/pipeline/loop.hpp"

#include "instgen/util/rng.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

namespace instgen::pipeline {

nlohmann::ordered_json LoopState::to_json() const
{
  return { { "iteration", iteration }, { "checkpoint", checkpoint }, { "restarts", restarts }, { "solved", solved } };
}

LoopState LoopState::from_json(const nlohmann::ordered_json& j)
{
  LoopState s;
  s.iteration = j.at("iteration").get<int>();
  s.checkpoint = j.value("checkpoint", std::string());
  s.restarts = j.value("restarts", 0);
  s.solved = j.value("solved", std::size_t{ 0 });
  return s;
}

LoopState LoopState::load(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) { return {}; }
  return from_json(nlohmann::ordered_json::parse(in));
}

void LoopState::save(const std::filesystem::path& path) const
{
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << to_json().dump(2) << "\n";
    if (!out) { throw std::runtime_error("cannot write " + tmp.string()); }
  }
  std::filesystem::rename(tmp, path);
}

namespace {

std::size_t distinct_solved(const std::vector<tptp::SolutionRecord>& records)
{
  std::set<std::string> s;
  for (const auto& r : records) {
    if (r.status == tptp::SolverStatus::unsat) { s.insert(r.problem); }
  }
  return s.size();
}

bool has_run(const std::vector<tptp::SolutionRecord>& records, int run)
{
  return std::any_of(records.begin(), records.end(), [&](const auto& r) { return r.run == run; });
}

}  // namespace

LoopState self_improve_loop(const std::vector<tptp::Problem>& problems,
                            const DatasetSplit& split,
                            inst::ExternalPolicy& policy,
                            const LoopConfig& config,
                            const LoopFiles& files)
{
  auto state = LoopState::load(files.state);
  const tptp::SolutionStore train_store(files.train_store);
  const tptp::SolutionStore eval_store(files.eval_store);

  std::vector<const tptp::Problem*> train;
  std::vector<const tptp::Problem*> test;
  std::map<std::string, const tptp::Problem*> by_name;
  for (const auto& p : problems) {
    by_name.emplace(p.name, &p);
    const auto part = split.part_of(p.family);
    if (part == Part::train) { train.push_back(&p); }
    if (part == Part::test) { test.push_back(&p); }
  }

  auto records = train_store.recover();
  auto eval_records = eval_store.recover();

  try {
    if (config.restart_fresh_model) {
      state.checkpoint = policy.reset();
      ++state.restarts;
      state.save(files.state);
      spdlog::info("policy reinitialized ({}); {} stored records kept", state.checkpoint, records.size());
    }

    while (state.iteration < config.until_iteration) {
      const int it = state.iteration;

      if (!has_run(records, it)) {
        // Uniform sample without replacement of the training problems.
        auto pool = train;
        Rng rng(attempt_seed(config.seed, "loop/attempts", static_cast<std::uint64_t>(it)));
        const auto k = std::min(config.attempts_per_iter, pool.size());
        for (std::size_t i = 0; i < k; ++i) { std::swap(pool[i], pool[i + rng.below(pool.size() - i)]); }
        pool.resize(k);
        auto outcomes = run_attempts(pool, policy, config.attempt, config.jobs, [&](const tptp::Problem& p) {
          return attempt_seed(config.seed, p.name, static_cast<std::uint64_t>(it));
        });
        std::vector<tptp::SolutionRecord> batch;
        for (auto& o : outcomes) {
          o.record.run = it;
          o.record.phase = "train";
          batch.push_back(std::move(o.record));
        }
        train_store.append(batch);
        records.insert(records.end(), batch.begin(), batch.end());
      }

      // Proofs eligible for training: solved training-family problems that needed instances.
      std::vector<const tptp::SolutionRecord*> proofs;
      for (const auto& r : records) {
        if (r.status != tptp::SolverStatus::unsat || r.instances.empty()) { continue; }
        auto p = by_name.find(r.problem);
        if (p == by_name.end() || split.part_of(p->second->family) != Part::train) { continue; }
        proofs.push_back(&r);
      }
      if (!proofs.empty() && config.train_samples_per_iter > 0) {
        Rng rng(attempt_seed(config.seed, "loop/train", static_cast<std::uint64_t>(it)));
        std::vector<inst::TrainItem> items;
        std::ofstream log(files.train_log, std::ios::app);
        for (std::size_t i = 0; i < config.train_samples_per_iter; ++i) {
          const auto& r = *proofs[rng.below(proofs.size())];
          const auto& problem = *by_name.at(r.problem);
          if (split.part_of(problem.family) == Part::test) {
            throw std::logic_error("refusing to train on test family " + problem.family);
          }
          items.push_back({ r, tptp::serialize_cnf(problem) });
          log << it << "\t" << problem.name << "\t" << problem.family << "\n";
        }
        state.checkpoint = policy.train(items, config.train_steps);
      }

      if (config.eval_every > 0 && (it + 1) % config.eval_every == 0 && !has_run(eval_records, it)) {
        auto outcomes = run_attempts(test, policy, config.attempt, config.jobs, [&](const tptp::Problem& p) {
          return attempt_seed(config.seed, p.name, static_cast<std::uint64_t>(it));
        });
        std::vector<tptp::SolutionRecord> batch;
        for (auto& o : outcomes) {
          o.record.run = it;
          o.record.phase = "eval";
          batch.push_back(std::move(o.record));
        }
        eval_store.append(batch);
        eval_records.insert(eval_records.end(), batch.begin(), batch.end());
        spdlog::info("iteration {}: test set solved {} of {}", it, distinct_solved(batch), batch.size());
      }

      state.solved = distinct_solved(records);
      state.iteration = it + 1;
      state.save(files.state);
      spdlog::info("iteration {} done: {} training problems solved", it, state.solved);
    }
  } catch (const inst::TransportError& e) {
    state.save(files.state);
    throw LoopInterrupted(std::string("policy unreachable, loop state saved: ") + e.what());
  }
  return state;
}

}  // namespace instgen::pipeline
