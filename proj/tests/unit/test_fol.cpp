#include "instgen/fol/deepen.hpp"
#include "instgen/tptp/cnf.hpp"
#include "instgen/util/rng.hpp"

#include <doctest.h>

#include <set>

using namespace instgen;
using namespace instgen::fol;

namespace {

const Symbol f2 = function_symbol("f", 2);
const Symbol t2 = function_symbol("t", 2);
const Symbol g1 = function_symbol("g", 1);
const Symbol c0 = function_symbol("c", 0);
const Symbol e0 = function_symbol("e", 0);

Clause clause(std::string_view text) { return tptp::parse_clause_text(text, "c1"); }

std::vector<std::uint32_t> ordinals(const std::vector<VariableId>& vars)
{
  std::vector<std::uint32_t> out;
  for (auto v : vars) { out.push_back(v.ordinal); }
  return out;
}

// Renames variables of a clause through `perm` (ordinal -> ordinal).
Term rename(const Term& t, const std::vector<std::uint32_t>& perm)
{
  if (t.is_variable()) { return Term::variable(perm.at(t.var().ordinal)); }
  std::vector<Term> args;
  for (const auto& a : t.args()) { args.push_back(rename(a, perm)); }
  return Term::apply(t.head(), std::move(args));
}

Clause rename(Clause c, const std::vector<std::uint32_t>& perm)
{
  for (auto& lit : c.literals) {
    for (auto& a : lit.atom.args) { a = rename(a, perm); }
  }
  return c;
}

}  // namespace

TEST_CASE("variables_in_order lists first occurrences depth first")
{
  const auto deepening = clause("p(f(X,Z))");
  CHECK(ordinals(variables_in_order(deepening)) == std::vector<std::uint32_t>{ 0, 1 });
  CHECK(variables_in_order(clause("p(c)")).empty());

  // Q(y, x, y): y first, then x.
  Clause q;
  q.id = "q";
  q.literals.push_back(
    { true, Atom::make_predicate(predicate_symbol("q", 3), { Term::variable(5), Term::variable(2), Term::variable(5) }) });
  CHECK(ordinals(variables_in_order(q)) == std::vector<std::uint32_t>{ 5, 2 });

  const auto multi = clause("~r(g(Y), X) | Y = f(Z, X)");
  CHECK(variables_in_order(multi).size() == 3);
}

TEST_CASE("deepen reproduces the two-step derivation from P(f(x,z)) to P(f(t(c,c),g(e)))")
{
  const auto level0 = clause("p(f(X,Z))");
  const auto level1 = deepen(level0, HeadAssignment{ "c1", { t2, g1 } }, "c1_1");
  CHECK(literals_to_string(level1) == "p(f(t(X0,X1),g(X2)))");
  CHECK(level1.level() == 1);
  CHECK(std::get<InstanceOrigin>(level1.origin).parent == "c1");
  CHECK(ordinals(variables_in_order(level1)) == std::vector<std::uint32_t>{ 0, 1, 2 });

  const auto level2 = deepen(level1, HeadAssignment{ "c1_1", { c0, c0, e0 } }, "c1_2");
  CHECK(literals_to_string(level2) == "p(f(t(c,c),g(e)))");
  CHECK(level2.level() == 2);
  CHECK(is_ground(level2));
  CHECK(std::get<InstanceOrigin>(level2.origin).assignment.heads == std::vector<Symbol>{ c0, c0, e0 });
}

TEST_CASE("deepen on a ground clause with an empty assignment is the identity")
{
  const auto ground = clause("p(f(t(c,c),g(e)))");
  CHECK(deepen(ground, HeadAssignment{ "c1", {} }, "x") == ground);
}

TEST_CASE("deepen shares fresh arguments between occurrences of one variable")
{
  const auto c = clause("r(X, g(X)) | X = Y");
  const auto d = deepen(c, HeadAssignment{ "c1", { t2, c0 } }, "d");
  CHECK(literals_to_string(d) == "r(t(X0,X1),g(t(X0,X1))) | t(X0,X1) = c");
}

TEST_CASE("deepen rejects malformed assignments")
{
  const auto c = clause("p(f(X,Z))");
  CHECK_THROWS_AS(deepen(c, HeadAssignment{ "c1", { t2 } }, "x"), MalformedAssignment);
  CHECK_THROWS_AS(deepen(c, HeadAssignment{ "c1", { t2, g1, c0 } }, "x"), MalformedAssignment);
  CHECK_THROWS_AS(deepen(c, HeadAssignment{ "c1", { t2, predicate_symbol("p", 1) } }, "x"), MalformedAssignment);

  Signature sig;
  sig.add(f2);
  sig.add(c0);
  CHECK_THROWS_AS(deepen(c, HeadAssignment{ "c1", { t2, c0 } }, "x", &sig), MalformedAssignment);
  CHECK_NOTHROW(deepen(c, HeadAssignment{ "c1", { f2, c0 } }, "x", &sig));

  const auto l1 = deepen(c, HeadAssignment{ "c1", { t2, g1 } }, "l1");
  const auto l2 = deepen(l1, HeadAssignment{ "l1", { t2, c0, c0 } }, "l2");
  CHECK(l2.level() == 2);
  CHECK_THROWS_AS(deepen(l2, HeadAssignment{ "l2", { c0, c0 } }, "l3"), MalformedAssignment);
}

TEST_CASE("is_ground")
{
  CHECK(is_ground(clause("p(f(t(c,c),g(e)))")));
  CHECK_FALSE(is_ground(clause("p(f(X,Z))")));
  CHECK(is_ground(Clause{}));
}

TEST_CASE("canonical_key identifies clauses up to variable renaming only")
{
  CHECK(canonical_key(clause("p(X,Y)")) == canonical_key(clause("p(U,V)")));
  CHECK(canonical_key(clause("p(X,X)")) != canonical_key(clause("p(X,Y)")));
  CHECK(canonical_key(clause("p(f(c))")) == canonical_key(clause("p(f(c))")));
  // Literal order is significant.
  CHECK(canonical_key(clause("p(X) | q(X)")) != canonical_key(clause("q(X) | p(X)")));
}

TEST_CASE("property: deepen preserves literal shape and produces sum-of-arity fresh variables")
{
  Rng rng(7);
  const std::vector<Symbol> pool{ f2, t2, g1, c0, e0 };
  const std::vector<std::string> clauses{ "p(f(X,Z))", "~r(g(Y), X) | Y = f(Z, X)", "q(X) | q(g(X)) | X != c",
                                          "r(X,Y) | r(Y,X)" };
  for (int round = 0; round < 200; ++round) {
    const auto c = clause(clauses[rng.below(clauses.size())]);
    const auto vars = variables_in_order(c);
    HeadAssignment a{ c.id, {} };
    std::size_t expected = 0;
    bool all_constants = true;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      a.heads.push_back(pool[rng.below(pool.size())]);
      expected += a.heads.back().arity;
      all_constants = all_constants && a.heads.back().arity == 0;
    }
    const auto d = deepen(c, a, "d");
    REQUIRE(d.literals.size() == c.literals.size());
    for (std::size_t i = 0; i < c.literals.size(); ++i) {
      CHECK(d.literals[i].positive == c.literals[i].positive);
      CHECK(d.literals[i].atom.kind == c.literals[i].atom.kind);
      CHECK(d.literals[i].atom.predicate == c.literals[i].atom.predicate);
    }
    const auto fresh = variables_in_order(d);
    CHECK(fresh.size() == expected);
    for (std::size_t i = 0; i < fresh.size(); ++i) { CHECK(fresh[i].ordinal == i); }
    CHECK(is_ground(d) == all_constants);
  }
}

TEST_CASE("property: canonical_key is invariant under bijective renaming")
{
  Rng rng(11);
  const auto c = clause("~r(g(Y), X) | Y = f(Z, X) | q(W)");
  for (int round = 0; round < 100; ++round) {
    std::vector<std::uint32_t> perm{ 10, 11, 12, 13 };
    for (std::size_t i = perm.size(); i > 1; --i) { std::swap(perm[i - 1], perm[rng.below(i)]); }
    CHECK(canonical_key(rename(c, perm)) == canonical_key(c));
    // Collapsing two variables changes the key.
    auto collapsed = perm;
    collapsed[1] = collapsed[0];
    CHECK(canonical_key(rename(c, collapsed)) != canonical_key(c));
  }
}

TEST_CASE("signature keeps first-occurrence order and rejects arity clashes")
{
  const auto p = tptp::parse_cnf("cnf(a, axiom, p(f(X,Z)) | q(c)).\ncnf(b, axiom, f(c,e) = g(c)).");
  std::vector<std::string> names;
  for (const auto& s : p.signature.functions()) { names.push_back(s.name); }
  CHECK(names == std::vector<std::string>{ "f", "c", "e", "g" });
  CHECK(p.signature.constants().size() == 2);
  CHECK(p.signature.predicates().size() == 2);

  Signature sig;
  sig.add(f2);
  CHECK_THROWS_AS(sig.add(function_symbol("f", 1)), SyntaxError);
  CHECK_THROWS_AS(sig.add(predicate_symbol("f", 2)), SyntaxError);
}
