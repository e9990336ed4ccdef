#include "oracles.hpp"

#include "instgen/fol/deepen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <map>
#include <set>
#include <string>

namespace instgen::testing {

bool satisfies(const std::vector<bool>& assignment, const std::vector<PropClause>& clauses)
{
  return std::all_of(clauses.begin(), clauses.end(), [&](const PropClause& c) {
    return std::any_of(c.begin(), c.end(), [&](Lit l) { return assignment[l.var()] != l.negated(); });
  });
}

bool truth_table_sat(std::size_t num_vars, const std::vector<PropClause>& clauses)
{
  std::vector<bool> assignment(num_vars);
  const std::uint64_t total = 1ULL << num_vars;
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    for (std::size_t v = 0; v < num_vars; ++v) { assignment[v] = ((bits >> v) & 1ULL) != 0; }
    if (satisfies(assignment, clauses)) { return true; }
  }
  return false;
}

std::vector<PropClause> random_kcnf(Rng& rng, std::size_t num_vars, std::size_t num_clauses, std::size_t k)
{
  std::vector<PropClause> out;
  for (std::size_t i = 0; i < num_clauses; ++i) {
    PropClause c;
    while (c.size() < std::min(k, num_vars)) {
      const auto v = static_cast<ground::Var>(rng.below(num_vars));
      if (std::any_of(c.begin(), c.end(), [&](Lit l) { return l.var() == v; })) { continue; }
      c.push_back(Lit(v, rng.below(2) == 1));
    }
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

// Term universe keyed by canonical text; children listed for congruence.
struct Universe
{
  std::map<std::string, std::size_t> index;
  std::vector<std::string> head;
  std::vector<std::vector<std::size_t>> children;

  std::size_t add(const fol::Term& t)
  {
    std::vector<std::size_t> kids;
    for (const auto& a : t.args()) { kids.push_back(add(a)); }
    auto key = fol::to_string(t);
    auto it = index.find(key);
    if (it != index.end()) { return it->second; }
    index.emplace(key, head.size());
    head.push_back(t.head().name);
    children.push_back(std::move(kids));
    return head.size() - 1;
  }
};

struct OracleAtom
{
  bool equality;
  std::string predicate;
  std::vector<std::size_t> args;
};

bool congruence_closed(const Universe& u, const std::vector<int>& block)
{
  for (std::size_t i = 0; i < u.head.size(); ++i) {
    for (std::size_t j = i + 1; j < u.head.size(); ++j) {
      if (block[i] == block[j] || u.head[i] != u.head[j] || u.children[i].size() != u.children[j].size()) {
        continue;
      }
      bool args_equal = true;
      for (std::size_t k = 0; k < u.children[i].size(); ++k) {
        args_equal = args_equal && block[u.children[i][k]] == block[u.children[j][k]];
      }
      if (args_equal) { return false; }
    }
  }
  return true;
}

// Tries every truth assignment to the predicate groups under one partition.
bool satisfiable_under(const std::vector<int>& block,
                       const std::vector<std::vector<std::pair<std::size_t, bool>>>& clause_atoms,
                       const std::vector<OracleAtom>& atoms)
{
  std::map<std::vector<std::string>, std::size_t> groups;
  std::vector<std::size_t> group_of(atoms.size(), 0);
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    if (atoms[a].equality) { continue; }
    std::vector<std::string> key{ atoms[a].predicate };
    for (auto t : atoms[a].args) { key.push_back(std::to_string(block[t])); }
    group_of[a] = groups.emplace(key, groups.size()).first->second;
  }
  const std::uint64_t total = 1ULL << groups.size();
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    bool all = true;
    for (const auto& clause : clause_atoms) {
      bool any = false;
      for (auto [a, positive] : clause) {
        bool value = atoms[a].equality ? block[atoms[a].args[0]] == block[atoms[a].args[1]]
                                       : ((bits >> group_of[a]) & 1ULL) != 0;
        if (value == positive) {
          any = true;
          break;
        }
      }
      if (!any) {
        all = false;
        break;
      }
    }
    if (all) { return true; }
  }
  return false;
}

bool enumerate_partitions(std::size_t i,
                          int blocks,
                          std::vector<int>& block,
                          const Universe& u,
                          const std::vector<std::vector<std::pair<std::size_t, bool>>>& clause_atoms,
                          const std::vector<OracleAtom>& atoms)
{
  if (i == block.size()) {
    return congruence_closed(u, block) && satisfiable_under(block, clause_atoms, atoms);
  }
  for (int b = 0; b <= blocks; ++b) {
    block[i] = b;
    if (enumerate_partitions(i + 1, std::max(blocks, b + 1), block, u, clause_atoms, atoms)) { return true; }
  }
  return false;
}

}  // namespace

bool euf_brute_force(const std::vector<fol::Clause>& clauses)
{
  Universe u;
  std::vector<OracleAtom> atoms;
  std::map<std::string, std::size_t> atom_index;
  std::vector<std::vector<std::pair<std::size_t, bool>>> clause_atoms;
  for (const auto& c : clauses) {
    std::vector<std::pair<std::size_t, bool>> lits;
    for (const auto& lit : c.literals) {
      OracleAtom a{ lit.atom.is_equality(), lit.atom.predicate.name, {} };
      for (const auto& t : lit.atom.args) { a.args.push_back(u.add(t)); }
      std::string key = a.equality ? "=" : a.predicate;
      for (auto t : a.args) { key += "," + std::to_string(t); }
      auto [it, inserted] = atom_index.emplace(key, atoms.size());
      if (inserted) { atoms.push_back(a); }
      lits.emplace_back(it->second, lit.positive);
    }
    clause_atoms.push_back(std::move(lits));
  }
  std::vector<int> block(u.head.size(), 0);
  if (block.empty()) { return satisfiable_under(block, clause_atoms, atoms); }
  return enumerate_partitions(0, 0, block, u, clause_atoms, atoms);
}

std::size_t distinct_subterms(const std::vector<fol::Clause>& clauses)
{
  Universe u;
  for (const auto& c : clauses) {
    for (const auto& lit : c.literals) {
      for (const auto& t : lit.atom.args) { u.add(t); }
    }
  }
  return u.head.size();
}

std::vector<fol::Clause> random_euf_problem(Rng& rng, std::size_t max_subterms)
{
  const std::vector<fol::Symbol> constants{ fol::function_symbol("a", 0), fol::function_symbol("b", 0),
                                            fol::function_symbol("c", 0), fol::function_symbol("d", 0) };
  const auto f = fol::function_symbol("f", 1);
  const auto g = fol::function_symbol("g", 2);
  const auto p = fol::predicate_symbol("p", 1);

  for (;;) {
    // A small pool of terms of depth <= 2.
    std::vector<fol::Term> pool;
    const auto n_consts = 2 + rng.below(3);
    for (std::size_t i = 0; i < n_consts; ++i) { pool.push_back(fol::Term::apply(constants[i])); }
    const auto n_apps = rng.below(4);
    for (std::size_t i = 0; i < n_apps; ++i) {
      if (rng.below(2) == 0) {
        pool.push_back(fol::Term::apply(f, { pool[rng.below(pool.size())] }));
      } else {
        pool.push_back(fol::Term::apply(g, { pool[rng.below(pool.size())], pool[rng.below(pool.size())] }));
      }
    }

    std::vector<fol::Clause> clauses;
    const auto n_clauses = 2 + rng.below(6);
    for (std::size_t i = 0; i < n_clauses; ++i) {
      fol::Clause c;
      c.id = "e" + std::to_string(i);
      const auto width = 1 + rng.below(rng.below(3) == 0 ? 3 : 1);
      for (std::size_t k = 0; k < width; ++k) {
        const bool positive = rng.below(2) == 0;
        if (rng.below(4) == 0) {
          c.literals.push_back({ positive, fol::Atom::make_predicate(p, { pool[rng.below(pool.size())] }) });
        } else {
          c.literals.push_back(
            { positive, fol::Atom::make_equality(pool[rng.below(pool.size())], pool[rng.below(pool.size())]) });
        }
      }
      clauses.push_back(std::move(c));
    }
    if (distinct_subterms(clauses) <= max_subterms) { return clauses; }
  }
}

double chi_square_uniform(const std::vector<std::size_t>& counts)
{
  const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::size_t{ 0 }));
  const double expected = total / static_cast<double>(counts.size());
  double stat = 0.0;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - expected;
    stat += d * d / expected;
  }
  return stat;
}

double chi_square_two_sample(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b)
{
  const double na = static_cast<double>(std::accumulate(a.begin(), a.end(), std::size_t{ 0 }));
  const double nb = static_cast<double>(std::accumulate(b.begin(), b.end(), std::size_t{ 0 }));
  double stat = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double cell = static_cast<double>(a[i] + b[i]);
    if (cell == 0.0) { continue; }
    const double ea = cell * na / (na + nb);
    const double eb = cell * nb / (na + nb);
    stat += (static_cast<double>(a[i]) - ea) * (static_cast<double>(a[i]) - ea) / ea;
    stat += (static_cast<double>(b[i]) - eb) * (static_cast<double>(b[i]) - eb) / eb;
  }
  return stat;
}

double chi_square_quantile(double dof, double z)
{
  const double h = 2.0 / (9.0 * dof);
  return dof * std::pow(1.0 - h + z * std::sqrt(h), 3.0);
}

}  // namespace instgen::testing
