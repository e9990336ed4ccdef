#include "replay_check.hpp"

#include "oracles.hpp"

#include "instgen/fol/deepen.hpp"
#include "instgen/ground/ground_solver.hpp"

namespace instgen::testing {

std::string replay_defect(const tptp::Problem& problem, const tptp::SolutionRecord& record)
{
  if (record.status != tptp::SolverStatus::unsat) { return "record is not unsat"; }
  std::vector<fol::Clause> ground;
  for (const auto& c : problem.clauses) {
    if (fol::is_ground(c)) { ground.push_back(c); }
  }
  for (const auto& inst : record.instances) {
    fol::Clause c;
    try {
      c = tptp::replay_instance(problem, inst);
    } catch (const std::exception& e) {
      return "instance of " + inst.parent + " does not replay: " + e.what();
    }
    if (!fol::is_ground(c)) { return "instance of " + inst.parent + " is not ground"; }
    if (fol::literals_to_string(c) != inst.ground_clause) {
      return "instance of " + inst.parent + " replays to " + fol::literals_to_string(c) + ", recorded " +
             inst.ground_clause;
    }
    ground.push_back(std::move(c));
  }
  if (distinct_subterms(ground) <= 9) {
    return euf_brute_force(ground) ? "replayed clauses are satisfiable (brute force)" : "";
  }
  return ground::decide_ground(ground).status == ground::GroundStatus::unsat ? ""
                                                                             : "replayed clauses are not unsat";
}

}  // namespace instgen::testing
