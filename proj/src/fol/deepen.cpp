#include "instgen/fol/deepen.hpp"

#include <unordered_map>

namespace instgen::fol {

namespace {

void visit_variables(const Term& term, std::vector<VariableId>& out, std::vector<bool>& seen)
{
  if (term.is_variable()) {
    const auto ord = term.var().ordinal;
    if (ord >= seen.size()) { seen.resize(ord + 1, false); }
    if (!seen[ord]) {
      seen[ord] = true;
      out.push_back(term.var());
    }
    return;
  }
  if (term.is_ground()) { return; }
  for (const auto& arg : term.args()) { visit_variables(arg, out, seen); }
}

struct Replacement
{
  Symbol head;
  std::uint32_t first_fresh = 0;
};

Term substitute(const Term& term, const std::unordered_map<std::uint32_t, Replacement>& map)
{
  if (term.is_variable()) {
    const auto& r = map.at(term.var().ordinal);
    std::vector<Term> args;
    args.reserve(r.head.arity);
    for (std::uint32_t i = 0; i < r.head.arity; ++i) { args.push_back(Term::variable(r.first_fresh + i)); }
    return Term::apply(r.head, std::move(args));
  }
  if (term.is_ground()) { return term; }
  std::vector<Term> args;
  args.reserve(term.args().size());
  for (const auto& arg : term.args()) { args.push_back(substitute(arg, map)); }
  return Term::apply(term.head(), std::move(args));
}

// Prints with variables renamed through `rename` (first-occurrence order).
void render(const Term& term, std::string& out, std::unordered_map<std::uint32_t, std::uint32_t>* rename)
{
  if (term.is_variable()) {
    auto ord = term.var().ordinal;
    if (rename != nullptr) {
      auto [it, inserted] = rename->try_emplace(ord, static_cast<std::uint32_t>(rename->size()));
      ord = it->second;
    }
    out += 'X';
    out += std::to_string(ord);
    return;
  }
  out += term.head().name;
  if (term.args().empty()) { return; }
  out += '(';
  bool first = true;
  for (const auto& arg : term.args()) {
    if (!first) { out += ','; }
    first = false;
    render(arg, out, rename);
  }
  out += ')';
}

void render(const Literal& lit, std::string& out, std::unordered_map<std::uint32_t, std::uint32_t>* rename)
{
  if (lit.atom.is_equality()) {
    render(lit.atom.left(), out, rename);
    out += lit.positive ? " = " : " != ";
    render(lit.atom.right(), out, rename);
    return;
  }
  if (!lit.positive) { out += '~'; }
  out += lit.atom.predicate.name;
  if (lit.atom.args.empty()) { return; }
  out += '(';
  bool first = true;
  for (const auto& arg : lit.atom.args) {
    if (!first) { out += ','; }
    first = false;
    render(arg, out, rename);
  }
  out += ')';
}

void render(const Clause& clause, std::string& out, std::unordered_map<std::uint32_t, std::uint32_t>* rename)
{
  if (clause.literals.empty()) {
    out += "$false";
    return;
  }
  bool first = true;
  for (const auto& lit : clause.literals) {
    if (!first) { out += " | "; }
    first = false;
    render(lit, out, rename);
  }
}

}  // namespace

std::vector<VariableId> variables_in_order(const Clause& clause)
{
  std::vector<VariableId> out;
  std::vector<bool> seen;
  for (const auto& lit : clause.literals) {
    for (const auto& arg : lit.atom.args) { visit_variables(arg, out, seen); }
  }
  return out;
}

std::size_t variable_count(const Clause& clause) { return variables_in_order(clause).size(); }

bool is_ground(const Clause& clause)
{
  for (const auto& lit : clause.literals) {
    for (const auto& arg : lit.atom.args) {
      if (!arg.is_ground()) { return false; }
    }
  }
  return true;
}

Clause deepen(const Clause& clause, const HeadAssignment& assignment, std::string instance_id, const Signature* signature)
{
  const auto vars = variables_in_order(clause);
  if (assignment.heads.size() != vars.size()) {
    throw MalformedAssignment("clause '" + clause.id + "' has " + std::to_string(vars.size())
                              + " variables but the assignment names " + std::to_string(assignment.heads.size())
                              + " head symbols");
  }
  if (vars.empty()) { return clause; }
  if (clause.level() >= max_instantiation_level) {
    throw MalformedAssignment("clause '" + clause.id + "' is already at the maximum instantiation level");
  }

  FreshNamer fresh;
  std::unordered_map<std::uint32_t, Replacement> map;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const auto& head = assignment.heads[i];
    if (head.kind != SymbolKind::function) {
      throw MalformedAssignment("head '" + head.name + "' for clause '" + clause.id + "' is not a function symbol");
    }
    if (signature != nullptr && !signature->contains(head)) {
      throw MalformedAssignment("head '" + head.name + "/" + std::to_string(head.arity) + "' for clause '"
                                + clause.id + "' is not in the signature");
    }
    map.emplace(vars[i].ordinal, Replacement{ head, fresh.issued() });
    for (std::uint32_t k = 0; k < head.arity; ++k) { fresh.next(); }
  }

  Clause out;
  out.id = std::move(instance_id);
  out.role = clause.role;
  out.literals.reserve(clause.literals.size());
  for (const auto& lit : clause.literals) {
    Literal copy{ lit.positive, lit.atom };
    for (auto& arg : copy.atom.args) { arg = substitute(arg, map); }
    out.literals.push_back(std::move(copy));
  }
  out.origin = InstanceOrigin{ clause.id, clause.level() + 1, assignment };
  return out;
}

std::string canonical_key(const Clause& clause)
{
  std::string out;
  std::unordered_map<std::uint32_t, std::uint32_t> rename;
  render(clause, out, &rename);
  return out;
}

std::string to_string(const Term& term)
{
  std::string out;
  render(term, out, nullptr);
  return out;
}

std::string to_string(const Literal& literal)
{
  std::string out;
  render(literal, out, nullptr);
  return out;
}

std::string literals_to_string(const Clause& clause)
{
  std::string out;
  render(clause, out, nullptr);
  return out;
}

}  // namespace instgen::fol
