#include "instgen/ground/ground_solver.hpp"

#include "instgen/ground/congruence.hpp"
#include "instgen/util/deadline.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace instgen::ground {

std::string_view to_string(GroundStatus status)
{
  switch (status) {
  case GroundStatus::unsat: return "unsat";
  case GroundStatus::sat: return "sat";
  case GroundStatus::timeout: return "timeout";
  }
  return "timeout";
}

namespace {

// Mirrors every clause into a DPLL reference solver and compares verdicts.
class CrossCheck
{
public:
  explicit CrossCheck(bool enabled) : enabled_(enabled) {}

  void add(std::span<const Lit> clause)
  {
    if (enabled_) { dpll_.add_clause(clause); }
  }

  void compare(SatResult cdcl, std::span<const Lit> assumptions, const std::vector<Lit>& failed, const Deadline& deadline)
  {
    if (!enabled_ || cdcl == SatResult::unknown) { return; }
    const auto reference = dpll_.solve(assumptions, deadline);
    if (reference == SatResult::unknown) { return; }
    if (reference != cdcl) { throw std::logic_error("CDCL and DPLL disagree on the propositional abstraction"); }
    if (cdcl == SatResult::unsat && dpll_.solve(failed, deadline) == SatResult::sat) {
      throw std::logic_error("CDCL reported failed assumptions that are satisfiable");
    }
  }

private:
  bool enabled_;
  DpllSolver dpll_;
};

}  // namespace

GroundVerdict decide_ground(std::span<const fol::Clause> clauses, const GroundOptions& options)
{
  const Stopwatch watch;
  const auto deadline = Deadline::after(options.budget_s);
  Abstraction abs = abstract(clauses);

  GroundVerdict verdict;
  verdict.stats.atoms = abs.atoms.size();
  verdict.stats.terms = abs.terms.size();

  const auto n_atoms = static_cast<Var>(abs.atoms.size());
  SatSolver sat;
  CrossCheck check(options.cross_check);
  std::vector<Lit> assumptions;
  assumptions.reserve(clauses.size());
  if (n_atoms + clauses.size() > 0) { sat.ensure_var(static_cast<Var>(n_atoms + clauses.size() - 1)); }
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    const auto selector = static_cast<Var>(n_atoms + i);
    PropClause pc = abs.clauses[i];
    pc.push_back(Lit::neg(selector));
    sat.add_clause(pc);
    check.add(pc);
    assumptions.push_back(Lit::pos(selector));
  }

  for (;;) {
    const auto result = sat.solve(assumptions, deadline);
    check.compare(result, assumptions, sat.failed_assumptions(), deadline);
    if (result == SatResult::unknown) {
      verdict.status = GroundStatus::timeout;
      break;
    }
    if (result == SatResult::unsat) {
      verdict.status = GroundStatus::unsat;
      for (auto l : sat.failed_assumptions()) {
        if (l.var() >= n_atoms && !l.negated()) { verdict.core.push_back(l.var() - n_atoms); }
      }
      if (verdict.core.empty()) {
        for (std::size_t i = 0; i < clauses.size(); ++i) { verdict.core.push_back(i); }
      }
      std::sort(verdict.core.begin(), verdict.core.end());
      verdict.core.erase(std::unique(verdict.core.begin(), verdict.core.end()), verdict.core.end());
      break;
    }

    ++verdict.stats.models;
    std::vector<bool> model(sat.model().begin(), sat.model().begin() + n_atoms);
    std::size_t merges = 0;
    auto cc = congruence_check(model, abs.atoms, abs.terms, options.max_blocking_per_model, &merges);
    verdict.stats.cc_merges += merges;
    if (cc.consistent) {
      verdict.status = GroundStatus::sat;
      for (Var v = 0; v < n_atoms; ++v) { verdict.model.emplace_back(abs.atoms.to_string(v, abs.terms), model[v]); }
      CongruenceClosure closure(abs.terms);
      for (Var v = 0; v < n_atoms; ++v) {
        const auto& a = abs.atoms.atom(v);
        if (a.equality && model[v]) { closure.assert_equal(a.args[0], a.args[1], v); }
      }
      for (const auto& cls : closure.classes()) {
        std::vector<std::string> names;
        for (auto t : cls) { names.push_back(abs.terms.to_string(t)); }
        verdict.classes.push_back(std::move(names));
      }
      break;
    }
    for (const auto& blocking : cc.blocking) {
      sat.add_clause(blocking);
      check.add(blocking);
      ++verdict.stats.blocking_clauses;
    }
    if (deadline.expired()) {
      verdict.status = GroundStatus::timeout;
      break;
    }
  }

  verdict.stats.sat_conflicts = sat.stats().conflicts;
  verdict.stats.sat_decisions = sat.stats().decisions;
  verdict.stats.seconds = watch.seconds();
  return verdict;
}

MinimizedCore minimize_core(std::span<const fol::Clause> clauses,
                            std::vector<std::size_t> core,
                            std::span<const std::size_t> pinned,
                            double budget_s)
{
  const auto deadline = Deadline::after(budget_s);
  const std::set<std::size_t> fixed(pinned.begin(), pinned.end());
  std::sort(core.begin(), core.end());
  core.erase(std::unique(core.begin(), core.end()), core.end());

  MinimizedCore out;
  const auto order = core;
  for (auto candidate : order) {
    if (fixed.contains(candidate)) { continue; }
    auto pos = std::lower_bound(core.begin(), core.end(), candidate);
    if (pos == core.end() || *pos != candidate) { continue; }
    if (deadline.expired()) {
      out.complete = false;
      break;
    }
    std::vector<std::size_t> rest;
    rest.reserve(core.size() - 1);
    std::copy_if(core.begin(), core.end(), std::back_inserter(rest), [&](auto i) { return i != candidate; });
    std::vector<fol::Clause> subset;
    subset.reserve(rest.size());
    for (auto i : rest) { subset.push_back(clauses[i]); }

    GroundOptions opts;
    opts.budget_s = std::max(0.0, deadline.remaining_s());
    const auto verdict = decide_ground(subset, opts);
    ++out.checks;
    if (verdict.status == GroundStatus::timeout) {
      out.complete = false;
      break;
    }
    if (verdict.status == GroundStatus::unsat) {
      std::set<std::size_t> next;
      for (auto k : verdict.core) { next.insert(rest[k]); }
      for (auto i : rest) {
        if (fixed.contains(i)) { next.insert(i); }
      }
      core.assign(next.begin(), next.end());
    }
  }
  out.core = std::move(core);
  return out;
}

}  // namespace instgen::ground
