#include "instgen/tptp/cnf.hpp"

#include "instgen/fol/deepen.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace instgen::tptp {

using fol::Atom;
using fol::Clause;
using fol::Literal;
using fol::Symbol;
using fol::Term;

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
  : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message), line_(line),
    column_(column)
{}

const Clause* Problem::find_clause(std::string_view id) const
{
  auto it = std::find_if(clauses.begin(), clauses.end(), [&](const Clause& c) { return c.id == id; });
  return it == clauses.end() ? nullptr : &*it;
}

std::string family_of(std::string_view stem, std::string_view separator)
{
  if (separator.empty()) { return std::string(stem); }
  auto pos = stem.find(separator);
  if (pos == std::string_view::npos || pos == 0) { return std::string(stem); }
  return std::string(stem.substr(0, pos));
}

Problem make_problem(std::string name, std::string family, std::vector<Clause> clauses)
{
  Problem p;
  p.family = family.empty() ? family_of(name) : std::move(family);
  p.name = std::move(name);
  p.signature = fol::Signature::of(clauses);
  p.clauses = std::move(clauses);
  return p;
}

namespace {

enum class Tok { lower, upper, dollar, integer, quoted, punct, end };

struct Token
{
  Tok kind = Tok::end;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer
{
public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next()
  {
    skip_layout();
    Token t;
    t.line = line_;
    t.column = column_;
    if (pos_ >= text_.size()) { return t; }
    const char c = text_[pos_];
    auto take_word = [&]() {
      const auto start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        advance();
      }
      return std::string(text_.substr(start, pos_ - start));
    };
    if (std::islower(static_cast<unsigned char>(c))) {
      t.kind = Tok::lower;
      t.text = take_word();
    } else if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Tok::upper;
      t.text = take_word();
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Tok::integer;
      t.text = take_word();
    } else if (c == '$') {
      advance();
      t.kind = Tok::dollar;
      t.text = "$" + take_word();
    } else if (c == '\'') {
      t.kind = Tok::quoted;
      t.text = read_quoted(t);
    } else if (c == '!' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
      advance();
      advance();
      t.kind = Tok::punct;
      t.text = "!=";
    } else {
      advance();
      t.kind = Tok::punct;
      t.text = std::string(1, c);
    }
    return t;
  }

  std::vector<std::pair<std::string, std::string>> headers;

private:
  void advance()
  {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_layout()
  {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '%') {
        const auto start = pos_;
        while (pos_ < text_.size() && text_[pos_] != '\n') { advance(); }
        record_header(text_.substr(start + 1, pos_ - start - 1));
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
        const auto line = line_;
        const auto column = column_;
        advance();
        advance();
        while (pos_ + 1 < text_.size() && !(text_[pos_] == '*' && text_[pos_ + 1] == '/')) { advance(); }
        if (pos_ + 1 >= text_.size()) { throw ParseError("unterminated block comment", line, column); }
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  void record_header(std::string_view body)
  {
    auto trim = [](std::string_view s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) { s.remove_prefix(1); }
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) { s.remove_suffix(1); }
      return s;
    };
    body = trim(body);
    for (std::string_view key : { "problem:", "family:" }) {
      if (body.starts_with(key)) {
        headers.emplace_back(std::string(key.substr(0, key.size() - 1)), std::string(trim(body.substr(key.size()))));
      }
    }
  }

  std::string read_quoted(const Token& at)
  {
    std::string out = "'";
    advance();
    while (pos_ < text_.size() && text_[pos_] != '\'') {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) {
        out += text_[pos_];
        advance();
      }
      out += text_[pos_];
      advance();
    }
    if (pos_ >= text_.size()) { throw ParseError("unterminated quoted name", at.line, at.column); }
    advance();
    out += '\'';
    return out;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

// A parsed name(args) or variable before we know whether it is a term or an atom.
struct RawTerm
{
  Token name;
  bool is_variable = false;
  std::vector<RawTerm> args;
};

class Parser
{
public:
  explicit Parser(std::string_view text) : lexer_(text) { shift(); }

  std::vector<Clause> parse_file()
  {
    std::vector<Clause> clauses;
    std::unordered_set<std::string> names;
    while (peek_.kind != Tok::end) {
      const Token at = peek_;
      if (peek_.kind != Tok::lower || peek_.text != "cnf") {
        fail("expected 'cnf(' but found '" + peek_.text + "'", peek_);
      }
      shift();
      expect("(");
      Clause clause;
      clause.id = expect_name("clause name");
      expect(",");
      clause.role = expect_name("role");
      expect(",");
      clause.literals = parse_formula();
      if (accept(",")) { skip_annotations(); }
      expect(")");
      expect(".");
      if (!names.insert(clause.id).second) { fail("duplicate clause name '" + clause.id + "'", at); }
      clauses.push_back(std::move(clause));
    }
    return clauses;
  }

  std::vector<Literal> parse_bare_disjunction()
  {
    auto lits = parse_formula();
    if (peek_.kind != Tok::end) { fail("unexpected '" + peek_.text + "' after clause", peek_); }
    return lits;
  }

  const Lexer& lexer() const { return lexer_; }
  const fol::Signature& signature() const { return signature_; }

private:
  [[noreturn]] static void fail(const std::string& message, const Token& at)
  {
    throw ParseError(message, at.line, at.column);
  }

  void shift() { peek_ = lexer_.next(); }

  bool accept(std::string_view punct)
  {
    if (peek_.kind == Tok::punct && peek_.text == punct) {
      shift();
      return true;
    }
    return false;
  }

  void expect(std::string_view punct)
  {
    if (!accept(punct)) {
      fail("expected '" + std::string(punct) + "' but found '" + (peek_.kind == Tok::end ? "<eof>" : peek_.text) + "'",
           peek_);
    }
  }

  std::string expect_name(const char* what)
  {
    if (peek_.kind == Tok::lower || peek_.kind == Tok::integer || peek_.kind == Tok::quoted) {
      auto name = peek_.text;
      shift();
      return name;
    }
    fail(std::string("expected ") + what, peek_);
  }

  void skip_annotations()
  {
    int depth = 0;
    while (peek_.kind != Tok::end) {
      if (peek_.kind == Tok::punct) {
        if (peek_.text == "(" || peek_.text == "[") {
          ++depth;
        } else if (peek_.text == ")" || peek_.text == "]") {
          if (depth == 0) { return; }
          --depth;
        }
      }
      shift();
    }
  }

  std::vector<Literal> parse_formula()
  {
    variables_.clear();
    std::vector<Literal> lits;
    bool parenthesized = accept("(");
    do {
      if (auto lit = parse_literal()) { lits.push_back(std::move(*lit)); }
    } while (accept("|"));
    if (parenthesized) { expect(")"); }
    return lits;
  }

  std::optional<Literal> parse_literal()
  {
    bool positive = true;
    while (accept("~")) { positive = !positive; }
    if (peek_.kind == Tok::dollar) {
      const Token at = peek_;
      shift();
      if (at.text == "$false" && positive) { return std::nullopt; }
      fail("unsupported literal '" + at.text + "'", at);
    }
    if (accept("(")) {
      auto lit = parse_literal();
      expect(")");
      if (lit && !positive) { lit->positive = !lit->positive; }
      return lit;
    }
    RawTerm lhs = parse_raw();
    if (peek_.kind == Tok::punct && (peek_.text == "=" || peek_.text == "!=")) {
      if (peek_.text == "!=") { positive = !positive; }
      shift();
      RawTerm rhs = parse_raw();
      Term left = to_term(lhs);
      Term right = to_term(rhs);
      return Literal{ positive, Atom::make_equality(std::move(left), std::move(right)) };
    }
    if (lhs.is_variable) { fail("a variable cannot stand as a literal", lhs.name); }
    auto pred = fol::predicate_symbol(lhs.name.text, static_cast<std::uint32_t>(lhs.args.size()));
    register_symbol(pred, lhs.name);
    std::vector<Term> args;
    for (const auto& a : lhs.args) { args.push_back(to_term(a)); }
    return Literal{ positive, Atom::make_predicate(std::move(pred), std::move(args)) };
  }

  RawTerm parse_raw()
  {
    RawTerm raw;
    raw.name = peek_;
    if (peek_.kind == Tok::upper) {
      raw.is_variable = true;
      shift();
      return raw;
    }
    if (peek_.kind != Tok::lower && peek_.kind != Tok::quoted && peek_.kind != Tok::integer) {
      fail("expected a term but found '" + (peek_.kind == Tok::end ? "<eof>" : peek_.text) + "'", peek_);
    }
    shift();
    if (accept("(")) {
      do { raw.args.push_back(parse_raw()); } while (accept(","));
      expect(")");
    }
    return raw;
  }

  Term to_term(const RawTerm& raw)
  {
    if (raw.is_variable) {
      auto [it, inserted] = variables_.try_emplace(raw.name.text, static_cast<std::uint32_t>(variables_.size()));
      return Term::variable(it->second);
    }
    auto fn = fol::function_symbol(raw.name.text, static_cast<std::uint32_t>(raw.args.size()));
    register_symbol(fn, raw.name);
    std::vector<Term> args;
    args.reserve(raw.args.size());
    for (const auto& a : raw.args) { args.push_back(to_term(a)); }
    return Term::apply(std::move(fn), std::move(args));
  }

  void register_symbol(const Symbol& s, const Token& at)
  {
    try {
      signature_.add(s);
    } catch (const fol::SyntaxError& e) {
      fail(e.what(), at);
    }
  }

  Lexer lexer_;
  Token peek_;
  std::unordered_map<std::string, std::uint32_t> variables_;
  fol::Signature signature_;
};

}  // namespace

Problem parse_cnf(std::string_view text, std::string name, std::string family)
{
  Parser parser(text);
  auto clauses = parser.parse_file();
  for (const auto& [key, value] : parser.lexer().headers) {
    if (key == "problem" && name.empty()) { name = value; }
    if (key == "family" && family.empty()) { family = value; }
  }
  Problem p;
  p.family = family.empty() ? family_of(name) : std::move(family);
  p.name = std::move(name);
  p.clauses = std::move(clauses);
  p.signature = parser.signature();
  return p;
}

Problem load_problem(const std::filesystem::path& file, std::string_view family_separator)
{
  std::ifstream in(file, std::ios::binary);
  if (!in) { throw std::runtime_error("cannot open " + file.string()); }
  std::stringstream buffer;
  buffer << in.rdbuf();
  const auto stem = file.stem().string();
  try {
    return parse_cnf(buffer.str(), stem, family_of(stem, family_separator));
  } catch (const ParseError& e) {
    throw ParseError(file.string() + ": " + e.what(), e.line(), e.column());
  }
}

std::vector<Problem> load_problems(const std::filesystem::path& dir, std::string_view family_separator)
{
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".p") { files.push_back(entry.path()); }
  }
  std::sort(files.begin(), files.end());
  std::vector<Problem> out;
  out.reserve(files.size());
  for (const auto& f : files) { out.push_back(load_problem(f, family_separator)); }
  return out;
}

Clause parse_clause_text(std::string_view literals, std::string id, std::string role)
{
  Parser parser(literals);
  Clause c;
  c.id = std::move(id);
  c.role = std::move(role);
  c.literals = parser.parse_bare_disjunction();
  return c;
}

std::string serialize_clause(const Clause& clause)
{
  return "cnf(" + clause.id + ", " + clause.role + ", " + fol::literals_to_string(clause) + ").";
}

std::string serialize_cnf(const Problem& problem)
{
  std::string out = "% problem: " + problem.name + "\n% family: " + problem.family + "\n";
  for (const auto& c : problem.clauses) {
    out += serialize_clause(c);
    out += '\n';
  }
  return out;
}

}  // namespace instgen::tptp
