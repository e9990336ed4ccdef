#ifndef INSTGEN_PIPELINE_ATTEMPT_HPP
#define INSTGEN_PIPELINE_ATTEMPT_HPP

#include "instgen/ground/ground_solver.hpp"
#include "instgen/inst/grounding.hpp"
#include "instgen/tptp/solution.hpp"

namespace instgen::pipeline {

struct AttemptConfig
{
  inst::PassConfig passes;
  /// Seconds for ground solving and core minimization together.
  double budget_s = ground::default_budget_s;
  bool minimize = true;
};

struct AttemptOutcome
{
  tptp::SolutionRecord record;
  /// Largest ground-instance count of any input clause.
  std::size_t max_instances_per_input = 0;
  std::size_t ground_clauses = 0;
  std::size_t core_before_minimization = 0;
  bool minimization_complete = true;
};

/**
 * Grounds `problem` with `policy`, decides the ground set and, on unsat,
 * minimizes the core and records the derivation of every instance left in it.
 *
 * Engine and solver failures become skipped or error records. Transport
 * failures of an external policy propagate, since the caller has to
 * checkpoint and stop.
 */
AttemptOutcome run_attempt(const tptp::Problem& problem,
                           inst::Policy& policy,
                           const AttemptConfig& config,
                           std::uint64_t seed);

}  // namespace instgen::pipeline

#endif
