#pragma once

// Surface grammar for knowledge bases, the line-oriented machine format for
// instances, proofs and derivations, a human text format, and DOT output.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "chaseq/calculus.hpp"
#include "chaseq/chase.hpp"

namespace chaseq {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct Problem {
  Database database;
  RuleSet rules;  // listed order is the cyclic rule order
  std::optional<BCQ> query;
};

/// Grammar:
///   fact    p(c1,...,cn).          (several atoms may share one statement)
///   rule    [name:] atoms -> atoms.
///   query   ? atoms.
/// In rules and queries an identifier is a constant iff it occurs in some fact
/// or is quoted ('name'); otherwise it is a variable. Identifiers starting with
/// '_' and the predicate TOP are reserved. '#' starts a comment.
Problem parse_problem(std::string_view text);

/// Inverse of parse_problem for problems whose variable names do not clash
/// with fact constants (throws std::invalid_argument otherwise).
std::string emit_problem(const Problem& p);

// Machine format. Constants are quoted, variables bare.
//   formula  P('a',x) | ~F | (F & G) | exists x. F
//   sequent  F, G |- H
std::string to_machine(const Term& t);
std::string to_machine(const Atom& a);
std::string to_machine(const Formula& f);
std::string to_machine(const Sequent& s);
std::string to_machine(const Substitution& s);
/// One `atom <atom>` line per atom.
std::string to_machine(const Instance& i);
/// `node <id> rule <label> concl <sequent> premises <ids>` lines, preorder,
/// root first.
std::string to_machine(const ProofTree& p);
/// `initial <atom>` lines then `step <rule> match {...} fresh {...}` lines.
std::string to_machine(const ChaseDerivation& d, const RuleSet& rules);

Term parse_machine_term(std::string_view text);
Atom parse_machine_atom(std::string_view text);
Formula parse_machine_formula(std::string_view text);
Sequent parse_machine_sequent(std::string_view text);
Substitution parse_machine_substitution(std::string_view text);
Instance parse_machine_instance(std::string_view text);
ProofTree parse_machine_proof(std::string_view text);
/// Replays the steps; throws ParseError on unknown rules or invalid steps.
ChaseDerivation parse_machine_derivation(std::string_view text, const RuleSet& rules);

// Text format (not a stability contract).
std::string to_text(const Term& t);
std::string to_text(const Atom& a);
std::string to_text(const Formula& f);
std::string to_text(const Sequent& s);
std::string to_text(const Substitution& s);
std::string to_text(const Instance& i);
std::string to_text(const RuleLabel& l);
std::string to_text(const ProofTree& p);
std::string to_text(const ChaseDerivation& d, const RuleSet& rules);
std::string to_text(const ExistentialRule& r);

/// Binary atoms become labelled edges, unary atoms node labels, others boxes
/// linked to their arguments.
std::string to_dot(const Instance& i);

}  // namespace chaseq
