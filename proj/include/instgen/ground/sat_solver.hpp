#ifndef INSTGEN_GROUND_SAT_SOLVER_HPP
#define INSTGEN_GROUND_SAT_SOLVER_HPP

#include "instgen/util/deadline.hpp"

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace instgen::ground {

using Var = std::uint32_t;

/// Propositional literal; code = 2*var + negated.
class Lit
{
public:
  constexpr Lit() = default;
  constexpr Lit(Var var, bool negated) : code_(2 * var + (negated ? 1U : 0U)) {}

  static constexpr Lit pos(Var v) { return { v, false }; }
  static constexpr Lit neg(Var v) { return { v, true }; }

  [[nodiscard]] constexpr Var var() const { return code_ >> 1U; }
  [[nodiscard]] constexpr bool negated() const { return (code_ & 1U) != 0; }
  [[nodiscard]] constexpr std::uint32_t code() const { return code_; }
  constexpr Lit operator~() const
  {
    Lit l;
    l.code_ = code_ ^ 1U;
    return l;
  }

  friend constexpr bool operator==(Lit, Lit) = default;
  friend constexpr auto operator<=>(Lit, Lit) = default;

private:
  std::uint32_t code_ = 0;
};

std::string to_string(Lit lit);

using PropClause = std::vector<Lit>;

enum class SatResult { sat, unsat, unknown };

struct SatStats
{
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t restarts = 0;
  std::uint64_t learnt_clauses = 0;
  std::uint64_t deleted_clauses = 0;
};

/**
 * Conflict-driven clause-learning solver: two watched literals, first-UIP
 * learning with clause minimization, activity-ordered decisions with phase
 * saving, Luby restarts and LBD-based learnt clause deletion.
 *
 * Incremental: clauses may be added between solve() calls. Under
 * assumptions, an unsat answer reports the assumptions that took part in the
 * refutation via failed_assumptions().
 */
class SatSolver
{
public:
  SatSolver();
  ~SatSolver();
  SatSolver(const SatSolver&) = delete;
  SatSolver& operator=(const SatSolver&) = delete;
  SatSolver(SatSolver&&) noexcept;
  SatSolver& operator=(SatSolver&&) noexcept;

  Var new_var();
  /// Grows the variable set so that `var` exists.
  void ensure_var(Var var);
  [[nodiscard]] std::size_t num_vars() const;

  /// Returns false once the clause set is known unsatisfiable without assumptions.
  bool add_clause(std::span<const Lit> lits);
  bool add_clause(std::initializer_list<Lit> lits) { return add_clause(std::span<const Lit>(lits.begin(), lits.size())); }

  SatResult solve(std::span<const Lit> assumptions = {}, const Deadline& deadline = Deadline::never());

  /// Model of the last sat answer, indexed by variable.
  [[nodiscard]] const std::vector<bool>& model() const;
  [[nodiscard]] bool model_value(Var var) const { return model().at(var); }
  [[nodiscard]] bool model_value(Lit lit) const { return model_value(lit.var()) != lit.negated(); }

  /// Assumptions responsible for the last unsat answer (empty if the clauses
  /// alone are unsatisfiable).
  [[nodiscard]] const std::vector<Lit>& failed_assumptions() const;

  [[nodiscard]] const SatStats& stats() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Plain recursive DPLL with unit propagation; a slow reference used to
/// cross-check SatSolver verdicts. Reports every assumption as failed.
class DpllSolver
{
public:
  Var new_var() { return static_cast<Var>(num_vars_++); }
  void ensure_var(Var var)
  {
    if (var >= num_vars_) { num_vars_ = var + 1; }
  }
  [[nodiscard]] std::size_t num_vars() const { return num_vars_; }

  void add_clause(std::span<const Lit> lits);
  SatResult solve(std::span<const Lit> assumptions = {}, const Deadline& deadline = Deadline::never());

  [[nodiscard]] const std::vector<bool>& model() const { return model_; }
  [[nodiscard]] const std::vector<Lit>& failed_assumptions() const { return failed_; }

private:
  std::vector<PropClause> clauses_;
  std::size_t num_vars_ = 0;
  std::vector<bool> model_;
  std::vector<Lit> failed_;
};

}  // namespace instgen::ground

#endif
