// Brute-force reference deciders and random problem generators for tests.
// They share no code with the solver path they check.
#ifndef INSTGEN_TESTS_ORACLES_HPP
#define INSTGEN_TESTS_ORACLES_HPP

#include "instgen/fol/syntax.hpp"
#include "instgen/ground/sat_solver.hpp"
#include "instgen/util/rng.hpp"

#include <vector>

namespace instgen::testing {

using ground::Lit;
using ground::PropClause;

/// Satisfiability by enumerating all 2^n assignments (n <= 24).
bool truth_table_sat(std::size_t num_vars, const std::vector<PropClause>& clauses);

/// True iff `assignment` satisfies every clause.
bool satisfies(const std::vector<bool>& assignment, const std::vector<PropClause>& clauses);

/// Random k-CNF with `num_clauses` clauses of distinct variables.
std::vector<PropClause> random_kcnf(Rng& rng, std::size_t num_vars, std::size_t num_clauses, std::size_t k = 3);

/// Ground EUF satisfiability by enumerating every partition of the subterm
/// set, keeping the congruence-closed ones, and trying all values of the
/// predicate atoms over each partition's classes.
bool euf_brute_force(const std::vector<fol::Clause>& clauses);

/// Number of distinct ground subterms occurring in `clauses`.
std::size_t distinct_subterms(const std::vector<fol::Clause>& clauses);

/// Random ground clauses over constants a..d, f/1, g/2 and predicate p/1,
/// with at most `max_subterms` distinct subterms.
std::vector<fol::Clause> random_euf_problem(Rng& rng, std::size_t max_subterms = 8);

/// Pearson statistic of `counts` against the uniform law over counts.size() cells.
double chi_square_uniform(const std::vector<std::size_t>& counts);

/// Pearson statistic for homogeneity of two count vectors over the same cells.
double chi_square_two_sample(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b);

/// Upper `z`-sigma quantile of the chi-square law with `dof` degrees of
/// freedom, by the Wilson-Hilferty cube approximation.
double chi_square_quantile(double dof, double z);

}  // namespace instgen::testing

#endif
