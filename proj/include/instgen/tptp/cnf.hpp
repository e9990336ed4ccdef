#ifndef INSTGEN_TPTP_CNF_HPP
#define INSTGEN_TPTP_CNF_HPP

#include "instgen/fol/syntax.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace instgen::tptp {

struct Problem
{
  std::string name;
  std::string family;
  std::vector<fol::Clause> clauses;
  fol::Signature signature;

  [[nodiscard]] const fol::Clause* find_clause(std::string_view id) const;

  friend bool operator==(const Problem&, const Problem&) = default;
};

/// Builds a problem, computing the signature. An empty family defaults to
/// family_of(name).
Problem make_problem(std::string name, std::string family, std::vector<fol::Clause> clauses);

class ParseError : public std::runtime_error
{
public:
  ParseError(const std::string& message, std::size_t line, std::size_t column);

  [[nodiscard]] std::size_t line() const { return line_; }
  [[nodiscard]] std::size_t column() const { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

inline constexpr std::string_view default_family_separator = "__";

/// Problem family of a file stem: the prefix up to the first separator, or the
/// whole stem when the separator does not occur.
std::string family_of(std::string_view stem, std::string_view separator = default_family_separator);

/**
 * Parses the CNF subset of TPTP: `cnf(name, role, l1 | ... | ln).` with `~`
 * negation, `=` / `!=`, uppercase-initial variables and `%` or block comments.
 * Optional trailing annotations are skipped. Header comments `% problem: ...`
 * and `% family: ...` supply name and family when the arguments are empty.
 */
Problem parse_cnf(std::string_view text, std::string name = {}, std::string family = {});

Problem load_problem(const std::filesystem::path& file, std::string_view family_separator = default_family_separator);

/// All `.p` files below `dir`, sorted by path.
std::vector<Problem> load_problems(const std::filesystem::path& dir,
                                   std::string_view family_separator = default_family_separator);

/// Parses a bare disjunction such as `~p(X) | a = b` into a clause.
fol::Clause parse_clause_text(std::string_view literals, std::string id = "c", std::string role = "axiom");

std::string serialize_cnf(const Problem& problem);
std::string serialize_clause(const fol::Clause& clause);

}  // namespace instgen::tptp

#endif
