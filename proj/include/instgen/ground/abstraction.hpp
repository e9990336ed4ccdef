#ifndef INSTGEN_GROUND_ABSTRACTION_HPP
#define INSTGEN_GROUND_ABSTRACTION_HPP

#include "instgen/fol/syntax.hpp"
#include "instgen/ground/sat_solver.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace instgen::ground {

using TermId = std::uint32_t;
using SymbolId = std::uint32_t;

class NonGroundInput : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

struct VectorHash
{
  std::size_t operator()(const std::vector<std::uint32_t>& key) const noexcept;
};

/// Hash-consed ground terms. Every subterm of an interned term is interned
/// first, so ids are topologically ordered (arguments before applications).
class TermBank
{
public:
  SymbolId intern_symbol(const fol::Symbol& symbol);
  TermId intern(const fol::Term& term);
  TermId make(SymbolId head, std::span<const TermId> args);

  [[nodiscard]] std::size_t size() const { return heads_.size(); }
  [[nodiscard]] SymbolId head(TermId t) const { return heads_[t]; }
  [[nodiscard]] std::span<const TermId> args(TermId t) const { return args_[t]; }
  [[nodiscard]] const fol::Symbol& symbol(SymbolId s) const { return symbols_[s]; }
  [[nodiscard]] std::size_t symbol_count() const { return symbols_.size(); }
  [[nodiscard]] std::string to_string(TermId t) const;

private:
  std::vector<fol::Symbol> symbols_;
  std::unordered_map<std::string, SymbolId> symbol_ids_;
  std::vector<SymbolId> heads_;
  std::vector<std::vector<TermId>> args_;
  std::unordered_map<std::vector<std::uint32_t>, TermId, VectorHash> ids_;
};

/// A ground atom over interned terms. Equalities keep their two sides sorted
/// by term id, so s = t and t = s coincide.
struct GroundAtom
{
  bool equality = false;
  SymbolId predicate = 0;
  std::vector<TermId> args;

  friend bool operator==(const GroundAtom&, const GroundAtom&) = default;
};

/// Bijection between ground atoms and propositional variables 0..size()-1.
class AtomTable
{
public:
  Var intern(const fol::Atom& atom, TermBank& terms);
  Var intern(GroundAtom atom);

  [[nodiscard]] std::size_t size() const { return atoms_.size(); }
  [[nodiscard]] const GroundAtom& atom(Var v) const { return atoms_[v]; }
  [[nodiscard]] std::string to_string(Var v, const TermBank& terms) const;

private:
  std::vector<GroundAtom> atoms_;
  std::unordered_map<std::vector<std::uint32_t>, Var, VectorHash> ids_;
};

struct Abstraction
{
  TermBank terms;
  AtomTable atoms;
  std::vector<PropClause> clauses;  // clauses[i] abstracts input clause i
};

/// Propositional abstraction of ground clauses: one variable per distinct
/// atom, polarity preserved. Throws NonGroundInput on a clause with variables.
Abstraction abstract(std::span<const fol::Clause> clauses);

}  // namespace instgen::ground

#endif
