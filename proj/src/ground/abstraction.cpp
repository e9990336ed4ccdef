#include "instgen/ground/abstraction.hpp"

#include "instgen/fol/deepen.hpp"

#include <algorithm>

namespace instgen::ground {

std::size_t VectorHash::operator()(const std::vector<std::uint32_t>& key) const noexcept
{
  std::size_t h = 0x9e3779b97f4a7c15ULL ^ key.size();
  for (auto x : key) { h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6U) + (h >> 2U); }
  return h;
}

SymbolId TermBank::intern_symbol(const fol::Symbol& symbol)
{
  auto key = symbol.name + '/' + std::to_string(symbol.arity);
  auto [it, inserted] = symbol_ids_.try_emplace(std::move(key), static_cast<SymbolId>(symbols_.size()));
  if (inserted) { symbols_.push_back(symbol); }
  return it->second;
}

TermId TermBank::make(SymbolId head, std::span<const TermId> args)
{
  std::vector<std::uint32_t> key;
  key.reserve(args.size() + 1);
  key.push_back(head);
  key.insert(key.end(), args.begin(), args.end());
  auto [it, inserted] = ids_.try_emplace(std::move(key), static_cast<TermId>(heads_.size()));
  if (inserted) {
    heads_.push_back(head);
    args_.emplace_back(args.begin(), args.end());
  }
  return it->second;
}

TermId TermBank::intern(const fol::Term& term)
{
  if (term.is_variable()) { throw NonGroundInput("cannot intern a variable: " + fol::to_string(term)); }
  std::vector<TermId> args;
  args.reserve(term.args().size());
  for (const auto& a : term.args()) { args.push_back(intern(a)); }
  return make(intern_symbol(term.head()), args);
}

std::string TermBank::to_string(TermId t) const
{
  std::string out = symbols_[heads_[t]].name;
  if (!args_[t].empty()) {
    out += '(';
    for (std::size_t i = 0; i < args_[t].size(); ++i) {
      if (i > 0) { out += ','; }
      out += to_string(args_[t][i]);
    }
    out += ')';
  }
  return out;
}

Var AtomTable::intern(GroundAtom atom)
{
  if (atom.equality && atom.args[0] > atom.args[1]) { std::swap(atom.args[0], atom.args[1]); }
  std::vector<std::uint32_t> key;
  key.reserve(atom.args.size() + 2);
  key.push_back(atom.equality ? 1U : 0U);
  key.push_back(atom.equality ? 0U : atom.predicate);
  key.insert(key.end(), atom.args.begin(), atom.args.end());
  auto [it, inserted] = ids_.try_emplace(std::move(key), static_cast<Var>(atoms_.size()));
  if (inserted) { atoms_.push_back(std::move(atom)); }
  return it->second;
}

Var AtomTable::intern(const fol::Atom& atom, TermBank& terms)
{
  GroundAtom g;
  g.equality = atom.is_equality();
  if (!g.equality) { g.predicate = terms.intern_symbol(atom.predicate); }
  for (const auto& a : atom.args) { g.args.push_back(terms.intern(a)); }
  return intern(std::move(g));
}

std::string AtomTable::to_string(Var v, const TermBank& terms) const
{
  const auto& a = atoms_[v];
  if (a.equality) { return terms.to_string(a.args[0]) + " = " + terms.to_string(a.args[1]); }
  std::string out = terms.symbol(a.predicate).name;
  if (!a.args.empty()) {
    out += '(';
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (i > 0) { out += ','; }
      out += terms.to_string(a.args[i]);
    }
    out += ')';
  }
  return out;
}

Abstraction abstract(std::span<const fol::Clause> clauses)
{
  Abstraction out;
  out.clauses.reserve(clauses.size());
  for (const auto& c : clauses) {
    if (!fol::is_ground(c)) { throw NonGroundInput("clause '" + c.id + "' is not ground"); }
    PropClause pc;
    pc.reserve(c.literals.size());
    for (const auto& lit : c.literals) {
      const Var v = out.atoms.intern(lit.atom, out.terms);
      pc.push_back(Lit(v, !lit.positive));
    }
    out.clauses.push_back(std::move(pc));
  }
  return out;
}

}  // namespace instgen::ground
