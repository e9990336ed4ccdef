#ifndef INSTGEN_GROUND_CONGRUENCE_HPP
#define INSTGEN_GROUND_CONGRUENCE_HPP

#include "instgen/ground/abstraction.hpp"

#include <deque>
#include <set>
#include <vector>

namespace instgen::ground {

/**
 * Congruence closure over the terms of a TermBank, with explanations.
 *
 * Union-find with a signature table keyed by (head, argument classes). Each
 * merge also adds an edge to a proof forest labelled either with the atom
 * variable that asserted it or with the pair of applications found congruent;
 * explain() walks that forest to recover the asserted equalities behind a
 * derived one.
 */
class CongruenceClosure
{
public:
  explicit CongruenceClosure(const TermBank& terms);

  void assert_equal(TermId a, TermId b, Var reason);

  [[nodiscard]] TermId find(TermId t) const;
  [[nodiscard]] bool equal(TermId a, TermId b) const { return find(a) == find(b); }

  /// Atom variables whose equalities entail a = b. Requires equal(a, b).
  [[nodiscard]] std::vector<Var> explain(TermId a, TermId b) const;

  /// Non-singleton classes, each sorted, ordered by smallest member.
  [[nodiscard]] std::vector<std::vector<TermId>> classes() const;

  [[nodiscard]] std::size_t merges() const { return merges_; }

private:
  struct Justification
  {
    bool congruence = false;
    Var atom = 0;        // asserted equality
    TermId left = 0;     // congruent applications
    TermId right = 0;
  };

  struct Edge
  {
    TermId to;
    Justification why;
  };

  struct Pending
  {
    TermId a;
    TermId b;
    Justification why;
  };

  std::vector<std::uint32_t> signature(TermId t) const;
  void propagate();
  void explain_into(TermId a, TermId b, std::set<Var>& out, std::set<std::pair<TermId, TermId>>& done) const;
  std::vector<const Edge*> forest_path(TermId from, TermId to) const;

  const TermBank& terms_;
  mutable std::vector<TermId> parent_;
  std::vector<std::uint32_t> size_;
  std::vector<std::vector<TermId>> use_;
  std::unordered_map<std::vector<std::uint32_t>, TermId, VectorHash> table_;
  std::vector<std::vector<Edge>> forest_;
  std::deque<Pending> pending_;
  std::size_t merges_ = 0;
};

struct CongruenceResult
{
  bool consistent = true;
  /// Each clause is entailed by the equality axioms and false under the model.
  std::vector<PropClause> blocking;
};

/**
 * Checks a total propositional model against reflexivity, symmetry,
 * transitivity and congruence. True equalities are merged; a conflict arises
 * when a false equality (including s = s) relates congruent terms, or when two
 * predicate atoms with congruent arguments disagree. At most `max_conflicts`
 * blocking clauses are returned.
 */
CongruenceResult congruence_check(const std::vector<bool>& model,
                                  const AtomTable& atoms,
                                  const TermBank& terms,
                                  std::size_t max_conflicts = 32,
                                  std::size_t* merges = nullptr);

}  // namespace instgen::ground

#endif
