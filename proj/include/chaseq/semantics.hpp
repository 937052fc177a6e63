#pragma once

// Substitutions, homomorphism search, satisfaction and model checking over
// finite instances. TOP atoms are never stored; TOP(t) holds for every term of
// the universe.

#include <functional>
#include <map>
#include <optional>
#include <span>

#include "chaseq/syntax.hpp"

namespace chaseq {

/// Finite partial map over terms. Unmapped terms are left unchanged by apply.
using Substitution = std::map<Term, Term>;

Term apply_subst(const Substitution& s, const Term& t);
Atom apply_subst(const Substitution& s, const Atom& a);
std::vector<Atom> apply_subst(const Substitution& s, std::span<const Atom> atoms);
/// Restriction of s to the given variables.
Substitution restrict(const Substitution& s, std::span<const Term> vars);

struct MatchOptions {
  bool injective = false;
  /// Variables may only map to variables (used for renamings).
  bool variables_to_variables = false;
};

/// Visitor returns false to stop the enumeration.
using MatchVisitor = std::function<bool(const Substitution&)>;

/// Enumerates every extension of `seed` mapping `pattern` into `target`,
/// constants fixed. Atoms are matched most-constrained first; candidates are
/// tried in sorted order, so the enumeration order is deterministic.
void for_each_match(std::span<const Atom> pattern, const Instance& target,
                    const Substitution& seed, const MatchVisitor& visit,
                    const MatchOptions& options = {});

std::optional<Substitution> find_match(std::span<const Atom> pattern, const Instance& target,
                                       const Substitution& seed = {},
                                       const MatchOptions& options = {});

std::optional<Substitution> find_homomorphism(const Instance& source, const Instance& target);
bool is_homomorphism(const Substitution& pi, const Instance& source, const Instance& target);
bool hom_equivalent(const Instance& a, const Instance& b);

/// Bijective variable renaming (constants fixed) carrying `a` onto `b`.
std::optional<Substitution> find_renaming(const Instance& a, const Instance& b);
bool equal_up_to_renaming(const Instance& a, const Instance& b);

/// T(I) together with the constants of `f` and the reserved truth constant.
TermSet quantifier_universe(const Instance& instance, const Formula& f);

/// Literal recursive satisfaction; throws std::invalid_argument if a free
/// variable of `f` is unassigned.
bool satisfies(const Instance& instance, const Substitution& assignment, const Formula& f);

/// I |= R: every body match extends to a head match inside I.
bool models_rules(const Instance& instance, const RuleSet& rules);
/// I |= D and I |= R.
bool models_kb(const Instance& instance, const Database& database, const RuleSet& rules);

/// Conjunction of the antecedent implies disjunction of the consequent,
/// elaborated into the core connectives.
Formula formula_interpretation(const Sequent& s);

}  // namespace chaseq
