#include "instgen/pipeline/attempt.hpp"

#include "instgen/inst/external_policy.hpp"
#include "instgen/util/deadline.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>

namespace instgen::pipeline {

AttemptOutcome run_attempt(const tptp::Problem& problem,
                           inst::Policy& policy,
                           const AttemptConfig& config,
                           std::uint64_t seed)
{
  const Stopwatch clock;
  AttemptOutcome out;
  auto& rec = out.record;
  rec.problem = problem.name;
  rec.policy = policy.kind();
  rec.seed = seed;

  try {
    const auto grounding = inst::two_pass_ground(problem, policy, config.passes, seed);
    rec.checkpoint = policy.checkpoint();
    out.ground_clauses = grounding.ground.size();
    for (const auto& [root, n] : grounding.instances_per_input) {
      out.max_instances_per_input = std::max(out.max_instances_per_input, n);
    }

    const auto deadline = Deadline::after(config.budget_s);
    ground::GroundOptions opts;
    opts.budget_s = deadline.remaining_s();
    const auto verdict = ground::decide_ground(grounding.ground, opts);
    switch (verdict.status) {
      case ground::GroundStatus::sat: rec.status = tptp::SolverStatus::sat; break;
      case ground::GroundStatus::timeout: rec.status = tptp::SolverStatus::timeout; break;
      case ground::GroundStatus::unsat: {
        rec.status = tptp::SolverStatus::unsat;
        auto core = verdict.core;
        out.core_before_minimization = core.size();
        if (config.minimize) {
          const auto m = ground::minimize_core(grounding.ground, core, {}, std::max(0.0, deadline.remaining_s()));
          core = m.core;
          out.minimization_complete = m.complete;
        }
        for (auto i : core) {
          const auto& clause = grounding.ground[i];
          if (clause.is_instance()) { rec.instances.push_back(grounding.provenance.record(clause.id)); }
        }
        break;
      }
    }
  } catch (const inst::TransportError&) {
    throw;
  } catch (const inst::NoConstants& e) {
    rec.status = tptp::SolverStatus::skipped;
    rec.reason = e.what();
    spdlog::info("skipping {}: {}", problem.name, e.what());
  } catch (const std::exception& e) {
    rec.status = tptp::SolverStatus::error;
    rec.reason = e.what();
    spdlog::warn("attempt on {} failed: {}", problem.name, e.what());
  }
  rec.wall_time_s = clock.seconds();
  return out;
}

}  // namespace instgen::pipeline
