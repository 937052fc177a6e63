#include "chaseq/frontend.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace chaseq {

namespace {

// ---------------------------------------------------------------------------
// Lexer shared by both grammars.

enum class Tok { Ident, Quoted, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto is_ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (is_ident(c)) {
      std::size_t j = i;
      while (j < src.size() && is_ident(src[j])) ++j;
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (c == '\'') {
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != '\'' && src[j] != '\n') ++j;
      if (j >= src.size() || src[j] != '\'') throw ParseError(line, col, "unterminated quote");
      t.kind = Tok::Quoted;
      t.text = std::string(src.substr(i + 1, j - i - 1));
      if (t.text.empty()) throw ParseError(line, col, "empty quoted name");
      advance(j - i + 1);
    } else {
      static const char* const two[] = {"->", "|-", ":="};
      t.kind = Tok::Punct;
      bool matched = false;
      for (const char* p : two) {
        if (src.substr(i, 2) == p) {
          t.text = p;
          advance(2);
          matched = true;
          break;
        }
      }
      if (!matched) {
        if (std::string_view("(),.?:~&{}").find(c) == std::string_view::npos) {
          throw ParseError(line, col, std::string("unexpected character '") + c + "'");
        }
        t.text = std::string(1, c);
        advance(1);
      }
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

class Cursor {
 public:
  explicit Cursor(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  Token next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == Tok::End; }
  bool is_punct(const char* p, std::size_t k = 0) const {
    return peek(k).kind == Tok::Punct && peek(k).text == p;
  }
  bool is_word(const char* w, std::size_t k = 0) const {
    return peek(k).kind == Tok::Ident && peek(k).text == w;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(peek().line, peek().column, what);
  }
  void expect(const char* p) {
    if (!is_punct(p)) fail(std::string("expected '") + p + "'");
    next();
  }
  void expect_word(const char* w) {
    if (!is_word(w)) fail(std::string("expected '") + w + "'");
    next();
  }
  std::string ident(const char* what) {
    if (peek().kind != Tok::Ident) fail(std::string("expected ") + what);
    return next().text;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Machine-format parsing.

class MachineParser {
 public:
  explicit MachineParser(Cursor& c) : c_(c) {}

  Term term() {
    const Token& t = c_.peek();
    if (t.kind == Tok::Quoted) return Term::constant(c_.next().text);
    if (t.kind == Tok::Ident) return Term::variable(c_.next().text);
    c_.fail("expected a term");
  }

  Atom atom() {
    std::string pred = c_.ident("a predicate");
    c_.expect("(");
    std::vector<Term> args;
    if (!c_.is_punct(")")) {
      args.push_back(term());
      while (c_.is_punct(",")) {
        c_.next();
        args.push_back(term());
      }
    }
    c_.expect(")");
    return Atom(std::move(pred), std::move(args));
  }

  bool at_formula() const {
    if (c_.is_punct("~") || c_.is_punct("(")) return true;
    if (c_.peek().kind != Tok::Ident) return false;
    if (c_.is_punct("(", 1)) return true;
    return c_.is_word("exists") && c_.peek(1).kind == Tok::Ident;
  }

  Formula formula() {
    if (c_.is_punct("~")) {
      c_.next();
      return Formula::negation(formula());
    }
    if (c_.is_punct("(")) {
      c_.next();
      Formula l = formula();
      c_.expect("&");
      Formula r = formula();
      c_.expect(")");
      return Formula::conjunction(std::move(l), std::move(r));
    }
    if (c_.is_word("exists") && c_.peek(1).kind == Tok::Ident) {
      c_.next();
      Term v = Term::variable(c_.next().text);
      c_.expect(".");
      return Formula::exists(std::move(v), formula());
    }
    return Formula::atom(atom());
  }

  FormulaSet formula_list() {
    FormulaSet out;
    if (!at_formula()) return out;
    out.insert(formula());
    while (c_.is_punct(",")) {
      c_.next();
      out.insert(formula());
    }
    return out;
  }

  Sequent sequent() {
    Sequent s;
    s.antecedent = formula_list();
    c_.expect("|-");
    s.consequent = formula_list();
    return s;
  }

  Substitution substitution() {
    Substitution s;
    c_.expect("{");
    if (!c_.is_punct("}")) {
      for (;;) {
        Term k = Term::variable(c_.ident("a variable"));
        c_.expect(":=");
        s[k] = term();
        if (!c_.is_punct(",")) break;
        c_.next();
      }
    }
    c_.expect("}");
    return s;
  }

  bool keep_flag() {
    if (c_.is_word("keep")) {
      c_.next();
      return true;
    }
    c_.expect_word("drop");
    return false;
  }

  RuleLabel label() {
    const std::string kind = c_.ident("a rule name");
    if (kind == "id") {
      c_.expect_word("principal");
      Formula f = formula();
      if (!f.is_atom()) c_.fail("id principal must be an atom");
      return RuleLabel::id(f.as_atom());
    }
    if (kind == "seq") {
      std::string id = c_.ident("a rule id");
      c_.expect_word("match");
      Substitution m = substitution();
      c_.expect_word("fresh");
      Substitution f = substitution();
      return RuleLabel::seq_rule(std::move(id), std::move(m), std::move(f));
    }
    if (kind == "existsr") {
      c_.expect_word("principal");
      Formula f = formula();
      c_.expect_word("witness");
      return RuleLabel::exists_right(std::move(f), term());
    }
    static const std::map<std::string, RuleKind> unary{{"negl", RuleKind::NegL},
                                                       {"negr", RuleKind::NegR},
                                                       {"andl", RuleKind::AndL},
                                                       {"andr", RuleKind::AndR},
                                                       {"existsl", RuleKind::ExistsL}};
    auto it = unary.find(kind);
    if (it == unary.end()) c_.fail("unknown rule kind '" + kind + "'");
    const bool keep = keep_flag();
    c_.expect_word("principal");
    Formula f = formula();
    if (it->second == RuleKind::ExistsL) {
      c_.expect_word("eigen");
      return RuleLabel::exists_left(std::move(f), term(), keep);
    }
    return RuleLabel::unary(it->second, std::move(f), keep);
  }

  void end() {
    if (!c_.at_end()) c_.fail("unexpected trailing input");
  }

 private:
  Cursor& c_;
};

template <typename F>
auto parse_whole(std::string_view text, F&& f) {
  Cursor c(lex(text));
  MachineParser p(c);
  auto out = f(p);
  p.end();
  return out;
}

/// Non-empty, non-comment lines with their 1-based numbers.
std::vector<std::pair<std::size_t, std::string_view>> lines_of(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t n = 0;
  while (!text.empty()) {
    ++n;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || line[first] == '#') continue;
    out.emplace_back(n, line);
  }
  return out;
}

/// Lexes one line, shifting error positions to the line number.
Cursor line_cursor(std::size_t n, std::string_view line) {
  try {
    auto toks = lex(line);
    for (auto& t : toks) t.line = n;
    return Cursor(std::move(toks));
  } catch (const ParseError& e) {
    throw ParseError(n, e.column(), std::string(e.what()).substr(std::string(e.what()).find(": ") + 2));
  }
}

// ---------------------------------------------------------------------------
// Printing helpers.

template <typename Range, typename F>
std::string join(const Range& r, const std::string& sep, F&& f) {
  std::string out;
  bool first = true;
  for (const auto& x : r) {
    if (!first) out += sep;
    first = false;
    out += f(x);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Surface grammar

namespace {

struct RawArg {
  std::string name;
  bool quoted = false;
};
struct RawAtom {
  std::string predicate;
  std::vector<RawArg> args;
  std::size_t line = 0, column = 0;
};
struct Statement {
  enum class Kind { Facts, Rule, Query } kind = Kind::Facts;
  std::string label;
  std::vector<RawAtom> body;
  std::vector<RawAtom> head;
  std::size_t line = 0, column = 0;
};

void check_reserved(const Token& t, bool predicate) {
  if (!t.text.empty() && t.text[0] == '_') {
    throw ParseError(t.line, t.column, "reserved identifier '" + t.text + "'");
  }
  if (predicate && t.text == kTopPredicate) {
    throw ParseError(t.line, t.column, "reserved predicate TOP");
  }
}

std::vector<RawAtom> raw_atoms(Cursor& c) {
  std::vector<RawAtom> out;
  for (;;) {
    if (c.peek().kind != Tok::Ident) c.fail("expected an atom");
    const Token pred = c.next();
    check_reserved(pred, true);
    RawAtom a{pred.text, {}, pred.line, pred.column};
    c.expect("(");
    if (!c.is_punct(")")) {
      for (;;) {
        const Token& t = c.peek();
        if (t.kind != Tok::Ident && t.kind != Tok::Quoted) c.fail("expected a term");
        check_reserved(t, false);
        a.args.push_back(RawArg{t.text, t.kind == Tok::Quoted});
        c.next();
        if (!c.is_punct(",")) break;
        c.next();
      }
    }
    c.expect(")");
    out.push_back(std::move(a));
    if (!c.is_punct(",")) break;
    c.next();
  }
  return out;
}

}  // namespace

Problem parse_problem(std::string_view text) {
  Cursor c(lex(text));
  std::vector<Statement> statements;
  while (!c.at_end()) {
    Statement s;
    s.line = c.peek().line;
    s.column = c.peek().column;
    if (c.is_punct("?")) {
      c.next();
      s.kind = Statement::Kind::Query;
      s.body = raw_atoms(c);
    } else {
      if (c.peek().kind == Tok::Ident && c.is_punct(":", 1)) {
        s.label = c.next().text;
        c.next();
      }
      s.body = raw_atoms(c);
      if (c.is_punct("->")) {
        c.next();
        s.kind = Statement::Kind::Rule;
        s.head = raw_atoms(c);
      } else if (!s.label.empty()) {
        throw ParseError(s.line, s.column, "only rules take a label");
      }
    }
    c.expect(".");
    statements.push_back(std::move(s));
  }

  std::set<std::string> fact_constants;
  for (const auto& s : statements) {
    if (s.kind != Statement::Kind::Facts) continue;
    for (const auto& a : s.body) {
      for (const auto& arg : a.args) fact_constants.insert(arg.name);
    }
  }

  Problem p;
  Signature sig;
  auto convert = [&](const RawAtom& raw, bool fact) {
    std::vector<Term> args;
    for (const auto& arg : raw.args) {
      const bool constant = fact || arg.quoted || fact_constants.count(arg.name);
      args.push_back(constant ? Term::constant(arg.name) : Term::variable(arg.name));
    }
    Atom a(raw.predicate, std::move(args));
    try {
      sig.observe(a);
    } catch (const SyntaxError& e) {
      throw ParseError(raw.line, raw.column, e.what());
    }
    return a;
  };

  std::set<std::string> ids;
  std::size_t rule_number = 0;
  for (const auto& s : statements) {
    std::vector<Atom> body, head;
    for (const auto& a : s.body) body.push_back(convert(a, s.kind == Statement::Kind::Facts));
    for (const auto& a : s.head) head.push_back(convert(a, false));
    try {
      switch (s.kind) {
        case Statement::Kind::Facts:
          for (auto& a : body) p.database.insert(a);
          break;
        case Statement::Kind::Rule: {
          ++rule_number;
          std::string id = s.label.empty() ? "r" + std::to_string(rule_number) : s.label;
          if (!ids.insert(id).second) {
            throw ParseError(s.line, s.column, "duplicate rule id '" + id + "'");
          }
          p.rules.push_back(ExistentialRule::make(std::move(id), std::move(body), std::move(head)));
          break;
        }
        case Statement::Kind::Query: {
          if (p.query) throw ParseError(s.line, s.column, "more than one query");
          std::vector<Term> vars;
          for (const auto& a : body) {
            for (const auto& t : a.args) {
              if (t.is_variable() && std::find(vars.begin(), vars.end(), t) == vars.end()) {
                vars.push_back(t);
              }
            }
          }
          p.query = BCQ::make(std::move(vars), std::move(body));
          break;
        }
      }
    } catch (const SyntaxError& e) {
      throw ParseError(s.line, s.column, e.what());
    }
  }
  return p;
}

std::string emit_problem(const Problem& p) {
  std::set<std::string> fact_constants;
  for (const auto& a : p.database) {
    for (const auto& t : a.args) fact_constants.insert(t.name());
  }
  auto term = [&](const Term& t) {
    if (t.is_constant()) return fact_constants.count(t.name()) ? t.name() : "'" + t.name() + "'";
    if (fact_constants.count(t.name())) {
      throw std::invalid_argument("variable " + t.name() + " clashes with a fact constant");
    }
    return t.name();
  };
  auto atom = [&](const Atom& a) {
    return a.predicate + "(" + join(a.args, ",", term) + ")";
  };
  std::string out;
  for (const auto& a : p.database) out += atom(a) + ".\n";
  for (const auto& r : p.rules) {
    out += r.id + ": " + join(r.body, ", ", atom) + " -> " + join(r.head, ", ", atom) + ".\n";
  }
  if (p.query) out += "? " + join(p.query->atoms, ", ", atom) + ".\n";
  return out;
}

// ---------------------------------------------------------------------------
// Machine format

std::string to_machine(const Term& t) {
  return t.is_constant() ? "'" + t.name() + "'" : t.name();
}

std::string to_machine(const Atom& a) {
  return a.predicate + "(" + join(a.args, ",", [](const Term& t) { return to_machine(t); }) + ")";
}

std::string to_machine(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      return to_machine(f.as_atom());
    case FormulaKind::Not:
      return "~" + to_machine(f.body());
    case FormulaKind::And:
      return "(" + to_machine(f.left()) + " & " + to_machine(f.right()) + ")";
    case FormulaKind::Exists:
      return "exists " + f.bound_variable().name() + ". " + to_machine(f.body());
  }
  return "";
}

std::string to_machine(const Sequent& s) {
  auto side = [](const FormulaSet& fs) {
    return join(fs, ", ", [](const Formula& f) { return to_machine(f); });
  };
  std::string out = side(s.antecedent);
  out += out.empty() ? "|-" : " |-";
  if (!s.consequent.empty()) out += " " + side(s.consequent);
  return out;
}

std::string to_machine(const Substitution& s) {
  return "{" + join(s, ", ", [](const auto& kv) {
           return kv.first.name() + ":=" + to_machine(kv.second);
         }) + "}";
}

std::string to_machine(const Instance& i) {
  std::string out;
  for (const auto& a : i) out += "atom " + to_machine(a) + "\n";
  return out;
}

namespace {

std::string label_to_machine(const RuleLabel& l) {
  const std::string keep = l.keep_principal ? "keep" : "drop";
  switch (l.kind) {
    case RuleKind::Id:
      return "id principal " + to_machine(*l.principal);
    case RuleKind::SeqRule:
      return "seq " + l.rule_id + " match " + to_machine(l.match) + " fresh " + to_machine(l.fresh);
    case RuleKind::ExistsR:
      return "existsr principal " + to_machine(*l.principal) + " witness " + to_machine(*l.witness);
    case RuleKind::ExistsL:
      return "existsl " + keep + " principal " + to_machine(*l.principal) + " eigen " +
             to_machine(*l.eigen);
    default:
      return std::string(to_string(l.kind)) + " " + keep + " principal " +
             to_machine(*l.principal);
  }
}

}  // namespace

std::string to_machine(const ProofTree& p) {
  std::string out;
  std::size_t next_id = 0;
  std::vector<std::pair<const ProofTree*, std::size_t>> stack{{&p, next_id++}};
  while (!stack.empty()) {
    auto [t, id] = stack.back();
    stack.pop_back();
    std::vector<std::size_t> kids;
    for (std::size_t k = 0; k < t->premises.size(); ++k) kids.push_back(next_id++);
    out += "node " + std::to_string(id) + " rule " + label_to_machine(t->label) + " concl " +
           to_machine(t->conclusion) + " premises";
    for (auto k : kids) out += " " + std::to_string(k);
    out += "\n";
    for (std::size_t k = t->premises.size(); k-- > 0;) {
      stack.push_back({&t->premises[k], kids[k]});
    }
  }
  return out;
}

std::string to_machine(const ChaseDerivation& d, const RuleSet& rules) {
  std::string out;
  for (const auto& a : d.initial()) out += "initial " + to_machine(a) + "\n";
  for (const auto& s : d.steps()) {
    const auto& rule = rules.at(s.trigger.rule);
    out += "step " + rule.id + " match " + to_machine(restrict(s.trigger.match, rule.body_vars)) +
           " fresh " + to_machine(s.fresh) + "\n";
  }
  return out;
}

Term parse_machine_term(std::string_view text) {
  return parse_whole(text, [](MachineParser& p) { return p.term(); });
}
Atom parse_machine_atom(std::string_view text) {
  return parse_whole(text, [](MachineParser& p) { return p.atom(); });
}
Formula parse_machine_formula(std::string_view text) {
  return parse_whole(text, [](MachineParser& p) { return p.formula(); });
}
Sequent parse_machine_sequent(std::string_view text) {
  return parse_whole(text, [](MachineParser& p) { return p.sequent(); });
}
Substitution parse_machine_substitution(std::string_view text) {
  return parse_whole(text, [](MachineParser& p) { return p.substitution(); });
}

Instance parse_machine_instance(std::string_view text) {
  Instance out;
  for (const auto& [n, line] : lines_of(text)) {
    Cursor c = line_cursor(n, line);
    MachineParser p(c);
    c.expect_word("atom");
    out.insert(p.atom());
    p.end();
  }
  return out;
}

ProofTree parse_machine_proof(std::string_view text) {
  struct Raw {
    Sequent conclusion;
    RuleLabel label;
    std::vector<std::size_t> premises;
    std::size_t line;
  };
  std::map<std::size_t, Raw> nodes;
  std::optional<std::size_t> root;
  auto number = [](Cursor& c) {
    const Token t = c.next();
    if (t.kind != Tok::Ident || t.text.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError(t.line, t.column, "expected a node id");
    }
    return static_cast<std::size_t>(std::stoull(t.text));
  };
  for (const auto& [n, line] : lines_of(text)) {
    Cursor c = line_cursor(n, line);
    MachineParser p(c);
    c.expect_word("node");
    const std::size_t id = number(c);
    c.expect_word("rule");
    RuleLabel label = p.label();
    c.expect_word("concl");
    Sequent concl = p.sequent();
    c.expect_word("premises");
    std::vector<std::size_t> premises;
    while (!c.at_end()) premises.push_back(number(c));
    if (!nodes.emplace(id, Raw{std::move(concl), std::move(label), std::move(premises), n}).second) {
      throw ParseError(n, 1, "duplicate node id " + std::to_string(id));
    }
    if (!root) root = id;
  }
  if (!root) throw ParseError(1, 1, "empty proof");

  // Post-order assembly without recursion.
  std::map<std::size_t, ProofTree> built;
  std::set<std::size_t> visited;
  std::vector<std::pair<std::size_t, bool>> stack{{*root, false}};
  while (!stack.empty()) {
    auto [id, expanded] = stack.back();
    stack.pop_back();
    auto it = nodes.find(id);
    if (it == nodes.end()) throw ParseError(1, 1, "missing node " + std::to_string(id));
    if (!expanded) {
      if (!visited.insert(id).second) {
        throw ParseError(it->second.line, 1, "node " + std::to_string(id) + " used twice");
      }
      stack.push_back({id, true});
      for (auto k : it->second.premises) stack.push_back({k, false});
      continue;
    }
    ProofTree t{std::move(it->second.conclusion), std::move(it->second.label), {}};
    for (auto k : it->second.premises) {
      t.premises.push_back(std::move(built.at(k)));
      built.erase(k);
    }
    built.emplace(id, std::move(t));
  }
  if (visited.size() != nodes.size()) throw ParseError(1, 1, "unreachable nodes in proof");
  return std::move(built.at(*root));
}

ChaseDerivation parse_machine_derivation(std::string_view text, const RuleSet& rules) {
  Instance initial;
  std::vector<std::tuple<std::size_t, std::string, Substitution, Substitution>> steps;
  for (const auto& [n, line] : lines_of(text)) {
    Cursor c = line_cursor(n, line);
    MachineParser p(c);
    if (c.is_word("initial")) {
      c.next();
      if (!steps.empty()) c.fail("initial atoms must precede steps");
      initial.insert(p.atom());
    } else if (c.is_word("step")) {
      c.next();
      std::string id = c.ident("a rule id");
      c.expect_word("match");
      Substitution m = p.substitution();
      c.expect_word("fresh");
      Substitution f = p.substitution();
      steps.emplace_back(n, std::move(id), std::move(m), std::move(f));
    } else if (c.is_word("witness") || c.is_word("final") || c.is_word("status")) {
      continue;
    } else {
      c.fail("expected 'initial' or 'step'");
    }
    p.end();
  }
  ChaseDerivation d(initial);
  for (auto& [n, id, match, fresh] : steps) {
    std::size_t r = rules.size();
    for (std::size_t k = 0; k < rules.size(); ++k) {
      if (rules[k].id == id) r = k;
    }
    if (r == rules.size()) throw ParseError(n, 1, "unknown rule " + id);
    try {
      d.push(Trigger{r, restrict(match, rules[r].body_vars)}, fresh, rules);
    } catch (const std::invalid_argument& e) {
      throw ParseError(n, 1, e.what());
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// Text format

std::string to_text(const Term& t) { return t.name(); }

std::string to_text(const Atom& a) {
  return a.predicate + "(" + join(a.args, ",", [](const Term& t) { return t.name(); }) + ")";
}

std::string to_text(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      return to_text(f.as_atom());
    case FormulaKind::Not:
      return "¬" + to_text(f.body());
    case FormulaKind::And:
      return "(" + to_text(f.left()) + " ∧ " + to_text(f.right()) + ")";
    case FormulaKind::Exists: {
      const std::string body = to_text(f.body());
      return "∃" + f.bound_variable().name() + (body.front() == '(' ? "" : " ") + body;
    }
  }
  return "";
}

std::string to_text(const Sequent& s) {
  auto side = [](const FormulaSet& fs) {
    return join(fs, ", ", [](const Formula& f) { return to_text(f); });
  };
  std::string out = side(s.antecedent);
  out += out.empty() ? "⊢" : " ⊢";
  if (!s.consequent.empty()) out += " " + side(s.consequent);
  return out;
}

std::string to_text(const Substitution& s) {
  return "{" + join(s, ", ", [](const auto& kv) {
           return kv.first.name() + "↦" + kv.second.name();
         }) + "}";
}

std::string to_text(const Instance& i) {
  return join(i, ", ", [](const Atom& a) { return to_text(a); });
}

std::string to_text(const RuleLabel& l) {
  switch (l.kind) {
    case RuleKind::Id:
      return "id";
    case RuleKind::NegL:
      return "¬L";
    case RuleKind::NegR:
      return "¬R";
    case RuleKind::AndL:
      return "∧L";
    case RuleKind::AndR:
      return "∧R";
    case RuleKind::ExistsL:
      return "∃L[" + l.eigen->name() + "]";
    case RuleKind::ExistsR:
      return "∃R[" + l.witness->name() + "]";
    case RuleKind::SeqRule:
      return "s(" + l.rule_id + ")";
  }
  return "?";
}

std::string to_text(const ProofTree& p) {
  std::string out;
  std::vector<std::pair<const ProofTree*, std::size_t>> stack{{&p, 0}};
  while (!stack.empty()) {
    auto [t, depth] = stack.back();
    stack.pop_back();
    out += std::string(2 * depth, ' ') + to_text(t->label) + "  " + to_text(t->conclusion) + "\n";
    const std::size_t child_depth = t->premises.size() > 1 ? depth + 1 : depth;
    for (std::size_t k = t->premises.size(); k-- > 0;) {
      stack.push_back({&t->premises[k], child_depth});
    }
  }
  return out;
}

std::string to_text(const ChaseDerivation& d, const RuleSet& rules) {
  std::string out;
  std::size_t n = 0;
  for (const auto& s : d.steps()) {
    const auto& rule = rules.at(s.trigger.rule);
    out += "step " + std::to_string(++n) + ": " + rule.id + " " +
           to_text(restrict(s.trigger.match, rule.body_vars)) + " adds " +
           join(s.added, ", ", [](const Atom& a) { return to_text(a); }) + "\n";
  }
  return out;
}

std::string to_text(const ExistentialRule& r) {
  auto atoms = [](const std::vector<Atom>& as) {
    return join(as, ", ", [](const Atom& a) { return to_text(a); });
  };
  return r.id + ": " + atoms(r.body) + " → " + atoms(r.head);
}

std::string to_dot(const Instance& i) {
  std::map<Term, std::vector<std::string>> unary;
  for (const auto& t : i.terms()) unary[t];
  std::string edges;
  std::size_t boxes = 0;
  auto quote = [](const Term& t) { return "\"" + t.name() + "\""; };
  for (const auto& a : i) {
    if (a.arity() == 1) {
      unary[a.args[0]].push_back(a.predicate);
    } else if (a.arity() == 2) {
      edges += "  " + quote(a.args[0]) + " -> " + quote(a.args[1]) + " [label=\"" + a.predicate +
               "\"];\n";
    } else {
      const std::string box = "\"atom" + std::to_string(boxes++) + "\"";
      edges += "  " + box + " [shape=box,label=\"" + a.predicate + "\"];\n";
      for (std::size_t k = 0; k < a.args.size(); ++k) {
        edges += "  " + box + " -> " + quote(a.args[k]) + " [label=\"" + std::to_string(k + 1) +
                 "\"];\n";
      }
    }
  }
  std::string out = "digraph instance {\n";
  for (const auto& [t, preds] : unary) {
    std::string label = t.name();
    if (!preds.empty()) label += "\\n" + join(preds, ",", [](const std::string& s) { return s; });
    out += "  " + quote(t) + " [label=\"" + label + "\"];\n";
  }
  out += edges + "}\n";
  return out;
}

}  // namespace chaseq
