#ifndef INSTGEN_FOL_SYNTAX_HPP
#define INSTGEN_FOL_SYNTAX_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace instgen::fol {

enum class SymbolKind : std::uint8_t { function, predicate };

/// A named symbol with a fixed arity. Constants are functions of arity 0.
struct Symbol
{
  std::string name;
  std::uint32_t arity = 0;
  SymbolKind kind = SymbolKind::function;

  [[nodiscard]] bool is_constant() const { return kind == SymbolKind::function && arity == 0; }

  friend bool operator==(const Symbol&, const Symbol&) = default;
  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

Symbol function_symbol(std::string name, std::uint32_t arity);
Symbol predicate_symbol(std::string name, std::uint32_t arity);

/// Clause-local variable, numbered by first occurrence.
struct VariableId
{
  std::uint32_t ordinal = 0;

  friend bool operator==(VariableId, VariableId) = default;
  friend auto operator<=>(VariableId, VariableId) = default;
};

class SyntaxError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/**
 * Immutable first-order term. Copies share structure, so terms are cheap to
 * pass around and safe to share between threads.
 */
class Term
{
public:
  static Term variable(VariableId id);
  static Term variable(std::uint32_t ordinal) { return variable(VariableId{ ordinal }); }
  /// Throws SyntaxError if `head` is not a function or the argument count differs from its arity.
  static Term apply(Symbol head, std::vector<Term> args = {});

  [[nodiscard]] bool is_variable() const;
  [[nodiscard]] VariableId var() const;
  [[nodiscard]] const Symbol& head() const;
  [[nodiscard]] std::span<const Term> args() const;
  [[nodiscard]] bool is_ground() const;

  friend bool operator==(const Term& a, const Term& b);

private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

enum class AtomKind : std::uint8_t { predicate, equality };

/// Either P(args...) or the distinguished binary equality left = right.
struct Atom
{
  AtomKind kind = AtomKind::predicate;
  Symbol predicate;  // unused for equality
  std::vector<Term> args;

  static Atom make_predicate(Symbol head, std::vector<Term> args = {});
  static Atom make_equality(Term left, Term right);

  [[nodiscard]] bool is_equality() const { return kind == AtomKind::equality; }
  [[nodiscard]] const Term& left() const { return args.at(0); }
  [[nodiscard]] const Term& right() const { return args.at(1); }

  friend bool operator==(const Atom&, const Atom&) = default;
};

struct Literal
{
  bool positive = true;
  Atom atom;

  friend bool operator==(const Literal&, const Literal&) = default;
};

/// Head symbols chosen for one clause's variables, in variable order.
struct HeadAssignment
{
  std::string clause;
  std::vector<Symbol> heads;

  friend bool operator==(const HeadAssignment&, const HeadAssignment&) = default;
};

/// Whole-clause skip marker a policy may return instead of an assignment.
struct Stop
{
  friend bool operator==(Stop, Stop) = default;
};

using Proposal = std::variant<Stop, HeadAssignment>;

struct InputOrigin
{
  friend bool operator==(const InputOrigin&, const InputOrigin&) = default;
};

struct InstanceOrigin
{
  std::string parent;
  int level = 1;
  HeadAssignment assignment;

  friend bool operator==(const InstanceOrigin&, const InstanceOrigin&) = default;
};

using Origin = std::variant<InputOrigin, InstanceOrigin>;

inline constexpr int max_instantiation_level = 2;

struct Clause
{
  std::string id;
  std::string role = "axiom";
  std::vector<Literal> literals;
  Origin origin = InputOrigin{};

  [[nodiscard]] bool is_instance() const { return std::holds_alternative<InstanceOrigin>(origin); }
  [[nodiscard]] int level() const;

  friend bool operator==(const Clause&, const Clause&) = default;
};

/// Function and predicate symbols in first-occurrence order.
class Signature
{
public:
  /// Adds `symbol` unless already present. Throws SyntaxError on an arity or kind clash.
  void add(const Symbol& symbol);

  [[nodiscard]] const std::vector<Symbol>& functions() const { return functions_; }
  [[nodiscard]] const std::vector<Symbol>& predicates() const { return predicates_; }
  [[nodiscard]] std::vector<Symbol> constants() const;
  [[nodiscard]] std::optional<Symbol> find(std::string_view name) const;
  [[nodiscard]] bool contains(const Symbol& symbol) const;

  static Signature of(std::span<const Clause> clauses);

  friend bool operator==(const Signature&, const Signature&) = default;

private:
  std::vector<Symbol> functions_;
  std::vector<Symbol> predicates_;
};

void collect_symbols(const Term& term, Signature& into);
void collect_symbols(const Clause& clause, Signature& into);

}  // namespace instgen::fol

#endif
