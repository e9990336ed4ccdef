#include "instgen/fol/syntax.hpp"

#include <algorithm>

namespace instgen::fol {

Symbol function_symbol(std::string name, std::uint32_t arity)
{
  return Symbol{ std::move(name), arity, SymbolKind::function };
}

Symbol predicate_symbol(std::string name, std::uint32_t arity)
{
  return Symbol{ std::move(name), arity, SymbolKind::predicate };
}

struct Term::Node
{
  std::variant<VariableId, Symbol> head;
  std::vector<Term> args;
  bool ground = false;
};

Term Term::variable(VariableId id)
{
  auto node = std::make_shared<Node>();
  node->head = id;
  node->ground = false;
  return Term(std::move(node));
}

Term Term::apply(Symbol head, std::vector<Term> args)
{
  if (head.kind != SymbolKind::function) {
    throw SyntaxError("'" + head.name + "' is a predicate, not a function symbol");
  }
  if (head.name.empty()) { throw SyntaxError("symbol name must be non-empty"); }
  if (args.size() != head.arity) {
    throw SyntaxError("'" + head.name + "' expects " + std::to_string(head.arity) + " arguments, got "
                      + std::to_string(args.size()));
  }
  auto node = std::make_shared<Node>();
  node->ground = std::all_of(args.begin(), args.end(), [](const Term& t) { return t.is_ground(); });
  node->head = std::move(head);
  node->args = std::move(args);
  return Term(std::move(node));
}

bool Term::is_variable() const { return std::holds_alternative<VariableId>(node_->head); }

VariableId Term::var() const { return std::get<VariableId>(node_->head); }

const Symbol& Term::head() const { return std::get<Symbol>(node_->head); }

std::span<const Term> Term::args() const { return node_->args; }

bool Term::is_ground() const { return node_->ground; }

bool operator==(const Term& a, const Term& b)
{
  if (a.node_ == b.node_) { return true; }
  return a.node_->head == b.node_->head && a.node_->args == b.node_->args;
}

Atom Atom::make_predicate(Symbol head, std::vector<Term> args)
{
  if (head.kind != SymbolKind::predicate) {
    throw SyntaxError("'" + head.name + "' is not a predicate symbol");
  }
  if (args.size() != head.arity) {
    throw SyntaxError("predicate '" + head.name + "' expects " + std::to_string(head.arity)
                      + " arguments, got " + std::to_string(args.size()));
  }
  return Atom{ AtomKind::predicate, std::move(head), std::move(args) };
}

Atom Atom::make_equality(Term left, Term right)
{
  std::vector<Term> args;
  args.push_back(std::move(left));
  args.push_back(std::move(right));
  return Atom{ AtomKind::equality, Symbol{}, std::move(args) };
}

int Clause::level() const
{
  if (const auto* inst = std::get_if<InstanceOrigin>(&origin)) { return inst->level; }
  return 0;
}

void Signature::add(const Symbol& symbol)
{
  auto clash = [&](const std::vector<Symbol>& symbols) {
    return std::find_if(
      symbols.begin(), symbols.end(), [&](const Symbol& s) { return s.name == symbol.name; });
  };
  auto& own = symbol.kind == SymbolKind::function ? functions_ : predicates_;
  auto& other = symbol.kind == SymbolKind::function ? predicates_ : functions_;
  if (clash(other) != other.end()) {
    throw SyntaxError("'" + symbol.name + "' is used both as a function and as a predicate");
  }
  auto it = clash(own);
  if (it == own.end()) {
    own.push_back(symbol);
    return;
  }
  if (it->arity != symbol.arity) {
    throw SyntaxError("arity conflict for '" + symbol.name + "': " + std::to_string(it->arity) + " vs "
                      + std::to_string(symbol.arity));
  }
}

std::vector<Symbol> Signature::constants() const
{
  std::vector<Symbol> out;
  std::copy_if(
    functions_.begin(), functions_.end(), std::back_inserter(out), [](const Symbol& s) { return s.arity == 0; });
  return out;
}

std::optional<Symbol> Signature::find(std::string_view name) const
{
  for (const auto* list : { &functions_, &predicates_ }) {
    for (const auto& s : *list) {
      if (s.name == name) { return s; }
    }
  }
  return std::nullopt;
}

bool Signature::contains(const Symbol& symbol) const
{
  const auto& list = symbol.kind == SymbolKind::function ? functions_ : predicates_;
  return std::find(list.begin(), list.end(), symbol) != list.end();
}

Signature Signature::of(std::span<const Clause> clauses)
{
  Signature sig;
  for (const auto& c : clauses) { collect_symbols(c, sig); }
  return sig;
}

void collect_symbols(const Term& term, Signature& into)
{
  if (term.is_variable()) { return; }
  into.add(term.head());
  for (const auto& arg : term.args()) { collect_symbols(arg, into); }
}

void collect_symbols(const Clause& clause, Signature& into)
{
  for (const auto& lit : clause.literals) {
    if (!lit.atom.is_equality()) { into.add(lit.atom.predicate); }
    for (const auto& arg : lit.atom.args) { collect_symbols(arg, into); }
  }
}

}  // namespace instgen::fol
