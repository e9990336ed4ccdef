#ifndef INSTGEN_FOL_DEEPEN_HPP
#define INSTGEN_FOL_DEEPEN_HPP

#include "instgen/fol/syntax.hpp"

#include <string>
#include <vector>

namespace instgen::fol {

class MalformedAssignment : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Distinct variables of `clause` by first occurrence: literals left to right,
/// arguments depth-first.
std::vector<VariableId> variables_in_order(const Clause& clause);
std::size_t variable_count(const Clause& clause);

bool is_ground(const Clause& clause);

/// Hands out fresh variable ordinals for one derivation step.
class FreshNamer
{
public:
  VariableId next() { return VariableId{ counter_++ }; }
  [[nodiscard]] std::uint32_t issued() const { return counter_; }

private:
  std::uint32_t counter_ = 0;
};

/**
 * One incremental-deepening step: every variable v of `clause` becomes
 * head(v) applied to `arity(head(v))` fresh variables. Occurrences of the same
 * variable receive the same fresh arguments. The result records `clause` as
 * its parent at level `clause.level() + 1`. A ground clause with an empty
 * assignment is returned unchanged.
 *
 * Fresh ordinals are issued in parent-variable order, so the result stays in
 * first-occurrence numbering.
 *
 * Throws MalformedAssignment if the assignment does not cover exactly the
 * clause's variables, names a non-function symbol, or would exceed
 * max_instantiation_level. When `signature` is given, every head must be one of
 * its functions.
 */
Clause deepen(const Clause& clause,
              const HeadAssignment& assignment,
              std::string instance_id,
              const Signature* signature = nullptr);

/// Key equal for two clauses iff they are equal up to a bijective variable
/// renaming. Literal order matters; id, role and origin do not.
std::string canonical_key(const Clause& clause);

// Canonical text rendering. Variables print as X<ordinal>.
std::string to_string(const Term& term);
std::string to_string(const Literal& literal);
/// Disjunction of literals; `$false` for the empty clause.
std::string literals_to_string(const Clause& clause);

}  // namespace instgen::fol

#endif
