// Independent re-check of a stored unsat record.
#ifndef INSTGEN_TESTS_REPLAY_CHECK_HPP
#define INSTGEN_TESTS_REPLAY_CHECK_HPP

#include "instgen/tptp/cnf.hpp"
#include "instgen/tptp/solution.hpp"

#include <string>

namespace instgen::testing {

/// Empty when `record` is a sound refutation of `problem`: every instance
/// replays to its recorded ground clause and those clauses together with the
/// ground input clauses are unsatisfiable. Otherwise a description of the
/// first defect. Small sets are decided by euf_brute_force, larger ones by
/// the ground solver.
std::string replay_defect(const tptp::Problem& problem, const tptp::SolutionRecord& record);

}  // namespace instgen::testing

#endif
