#ifndef INSTGEN_GROUND_GROUND_SOLVER_HPP
#define INSTGEN_GROUND_GROUND_SOLVER_HPP

#include "instgen/fol/syntax.hpp"
#include "instgen/ground/abstraction.hpp"

#include <span>
#include <string>
#include <vector>

namespace instgen::ground {

inline constexpr double default_budget_s = 30.0;

enum class GroundStatus { unsat, sat, timeout };

std::string_view to_string(GroundStatus status);

struct GroundStats
{
  std::uint64_t models = 0;           // propositional models checked for equality
  std::uint64_t blocking_clauses = 0;
  std::uint64_t cc_merges = 0;
  std::uint64_t sat_conflicts = 0;
  std::uint64_t sat_decisions = 0;
  std::uint64_t atoms = 0;
  std::uint64_t terms = 0;
  double seconds = 0.0;
};

struct GroundVerdict
{
  GroundStatus status = GroundStatus::timeout;
  /// unsat: indices into the input clauses of an unsatisfiable subset.
  std::vector<std::size_t> core;
  /// sat: value of every atom, printed atom alongside.
  std::vector<std::pair<std::string, bool>> model;
  /// sat: non-singleton congruence classes of the accepted model.
  std::vector<std::vector<std::string>> classes;
  GroundStats stats;
};

struct GroundOptions
{
  double budget_s = default_budget_s;
  /// Re-decide the final abstraction with DpllSolver and throw std::logic_error on disagreement.
  bool cross_check = false;
  std::size_t max_blocking_per_model = 32;
};

/**
 * Decides a set of ground clauses with equality. The SAT solver enumerates
 * models of the propositional abstraction; each is checked with congruence
 * closure and, if it violates the equality axioms, excluded by blocking
 * clauses. Each input clause carries a selector assumption, so an unsat
 * answer names the input clauses it used.
 *
 * Throws NonGroundInput if a clause has variables.
 */
GroundVerdict decide_ground(std::span<const fol::Clause> clauses, const GroundOptions& options = {});

struct MinimizedCore
{
  std::vector<std::size_t> core;  // sorted indices into the input clauses
  bool complete = true;           // false if the budget ran out before 1-minimality was established
  std::size_t checks = 0;
};

/**
 * Deletion-based core minimization: tries to drop each non-pinned clause of
 * `core` in turn and keeps the drop when the rest stays unsat. A completed
 * result is 1-minimal among non-pinned clauses. On budget exhaustion the best
 * core found so far is returned with complete = false.
 */
MinimizedCore minimize_core(std::span<const fol::Clause> clauses,
                            std::vector<std::size_t> core,
                            std::span<const std::size_t> pinned = {},
                            double budget_s = default_budget_s);

}  // namespace instgen::ground

#endif
