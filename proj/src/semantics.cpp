#include "chaseq/semantics.hpp"

#include <tuple>
#include <algorithm>
#include <stdexcept>

namespace chaseq {

Term apply_subst(const Substitution& s, const Term& t) {
  auto it = s.find(t);
  return it == s.end() ? t : it->second;
}

Atom apply_subst(const Substitution& s, const Atom& a) {
  Atom out = a;
  for (auto& t : out.args) t = apply_subst(s, t);
  return out;
}

std::vector<Atom> apply_subst(const Substitution& s, std::span<const Atom> atoms) {
  std::vector<Atom> out;
  out.reserve(atoms.size());
  for (const auto& a : atoms) out.push_back(apply_subst(s, a));
  return out;
}

Substitution restrict(const Substitution& s, std::span<const Term> vars) {
  Substitution out;
  for (const auto& v : vars) {
    auto it = s.find(v);
    if (it != s.end()) out.emplace(it->first, it->second);
  }
  return out;
}

namespace {

class Matcher {
 public:
  Matcher(std::span<const Atom> pattern, const Instance& target, const Substitution& seed,
          const MatchVisitor& visit, const MatchOptions& options)
      : target_(target), visit_(visit), options_(options), binding_(seed) {
    for (const auto& a : pattern) {
      if (a.is_top()) {
        for (const auto& t : a.args) {
          if (t.is_variable()) top_vars_.push_back(t);
        }
      } else {
        atoms_.push_back(&a);
      }
    }
    std::sort(top_vars_.begin(), top_vars_.end());
    top_vars_.erase(std::unique(top_vars_.begin(), top_vars_.end()), top_vars_.end());
    done_.assign(atoms_.size(), false);
    if (options_.injective) {
      for (const auto& [k, v] : binding_) images_.insert(v);
    }
  }

  void run() { search(0); }

 private:
  bool is_bound(const Term& t) const { return t.is_constant() || binding_.count(t) != 0; }

  std::size_t pick_next() const {
    std::size_t best = atoms_.size();
    std::size_t best_score = 0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (done_[i]) continue;
      std::size_t score = 0;
      for (const auto& t : atoms_[i]->args) score += is_bound(t) ? 1 : 0;
      if (best == atoms_.size() || score > best_score ||
          (score == best_score &&
           std::tie(atoms_[i]->predicate, i) < std::tie(atoms_[best]->predicate, best))) {
        best = i;
        best_score = score;
      }
    }
    return best;
  }

  // Binds pattern args against a candidate; records new bindings in `added`.
  bool unify(const Atom& pattern, const Atom& candidate, std::vector<Term>& added) {
    if (pattern.arity() != candidate.arity()) return false;
    for (std::size_t k = 0; k < pattern.args.size(); ++k) {
      const Term& p = pattern.args[k];
      const Term& c = candidate.args[k];
      if (p.is_constant()) {
        if (p != c) return false;
        continue;
      }
      auto it = binding_.find(p);
      if (it != binding_.end()) {
        if (it->second != c) return false;
        continue;
      }
      if (options_.variables_to_variables && !c.is_variable()) return false;
      if (options_.injective && images_.count(c)) return false;
      binding_.emplace(p, c);
      if (options_.injective) images_.insert(c);
      added.push_back(p);
    }
    return true;
  }

  void unbind(const std::vector<Term>& added) {
    for (const auto& v : added) {
      if (options_.injective) images_.erase(binding_.at(v));
      binding_.erase(v);
    }
  }

  bool search(std::size_t matched) {
    if (matched == atoms_.size()) return bind_top_vars(0);
    const std::size_t i = pick_next();
    const Atom& pattern = *atoms_[i];
    done_[i] = true;
    auto [first, last] = target_.with_predicate(pattern.predicate);
    if (!pattern.args.empty()) {
      const Term& head = pattern.args[0];
      if (head.is_constant()) {
        std::tie(first, last) = target_.with_first_argument(pattern.predicate, head);
      } else if (auto b = binding_.find(head); b != binding_.end()) {
        std::tie(first, last) = target_.with_first_argument(pattern.predicate, b->second);
      }
    }
    for (auto it = first; it != last; ++it) {
      std::vector<Term> added;
      if (unify(pattern, *it, added)) {
        const bool keep_going = search(matched + 1);
        unbind(added);
        if (!keep_going) {
          done_[i] = false;
          return false;
        }
      } else {
        unbind(added);
      }
    }
    done_[i] = false;
    return true;
  }

  bool bind_top_vars(std::size_t k) {
    while (k < top_vars_.size() && binding_.count(top_vars_[k])) ++k;
    if (k == top_vars_.size()) return visit_(binding_);
    std::vector<Term> universe = target_.sorted_terms();
    if (universe.empty()) universe.push_back(Term::truth_constant());
    for (const auto& t : universe) {
      if (options_.variables_to_variables && !t.is_variable()) continue;
      if (options_.injective && images_.count(t)) continue;
      binding_.emplace(top_vars_[k], t);
      if (options_.injective) images_.insert(t);
      const bool keep_going = bind_top_vars(k + 1);
      if (options_.injective) images_.erase(t);
      binding_.erase(top_vars_[k]);
      if (!keep_going) return false;
    }
    return true;
  }

  const Instance& target_;
  const MatchVisitor& visit_;
  MatchOptions options_;
  Substitution binding_;
  TermSet images_;
  std::vector<const Atom*> atoms_;
  std::vector<Term> top_vars_;
  std::vector<bool> done_;
};

}  // namespace

void for_each_match(std::span<const Atom> pattern, const Instance& target,
                    const Substitution& seed, const MatchVisitor& visit,
                    const MatchOptions& options) {
  Matcher(pattern, target, seed, visit, options).run();
}

std::optional<Substitution> find_match(std::span<const Atom> pattern, const Instance& target,
                                       const Substitution& seed, const MatchOptions& options) {
  std::optional<Substitution> found;
  for_each_match(
      pattern, target, seed,
      [&](const Substitution& s) {
        found = s;
        return false;
      },
      options);
  return found;
}

std::optional<Substitution> find_homomorphism(const Instance& source, const Instance& target) {
  const std::vector<Atom> atoms = source.atoms();
  return find_match(atoms, target);
}

bool is_homomorphism(const Substitution& pi, const Instance& source, const Instance& target) {
  for (const auto& [from, to] : pi) {
    if (from.is_constant() && from != to) return false;
  }
  for (const auto& a : source) {
    if (a.is_top()) continue;
    if (!target.contains(apply_subst(pi, a))) return false;
  }
  return true;
}

bool hom_equivalent(const Instance& a, const Instance& b) {
  return find_homomorphism(a, b).has_value() && find_homomorphism(b, a).has_value();
}

std::optional<Substitution> find_renaming(const Instance& a, const Instance& b) {
  if (a.size() != b.size()) return std::nullopt;
  const std::vector<Atom> atoms = a.atoms();
  return find_match(atoms, b, {}, MatchOptions{.injective = true, .variables_to_variables = true});
}

bool equal_up_to_renaming(const Instance& a, const Instance& b) {
  return find_renaming(a, b).has_value();
}

TermSet quantifier_universe(const Instance& instance, const Formula& f) {
  TermSet universe = instance.terms();
  for (const auto& c : constants_of(f)) universe.insert(c);
  universe.insert(Term::truth_constant());
  return universe;
}

namespace {

bool eval(const Instance& instance, const TermSet& universe, Substitution& mu, const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Atom: {
      const Atom& a = f.as_atom();
      Atom image = a;
      for (auto& t : image.args) {
        if (t.is_variable()) {
          auto it = mu.find(t);
          if (it == mu.end()) throw std::invalid_argument("unassigned variable " + t.name());
          t = it->second;
        }
      }
      if (image.is_top()) return true;
      return instance.contains(image);
    }
    case FormulaKind::Not:
      return !eval(instance, universe, mu, f.body());
    case FormulaKind::And:
      return eval(instance, universe, mu, f.left()) && eval(instance, universe, mu, f.right());
    case FormulaKind::Exists: {
      const Term& x = f.bound_variable();
      std::optional<Term> saved;
      if (auto it = mu.find(x); it != mu.end()) saved = it->second;
      bool result = false;
      for (const auto& t : universe) {
        mu[x] = t;
        if (eval(instance, universe, mu, f.body())) {
          result = true;
          break;
        }
      }
      if (saved) {
        mu[x] = *saved;
      } else {
        mu.erase(x);
      }
      return result;
    }
  }
  return false;
}

}  // namespace

bool satisfies(const Instance& instance, const Substitution& assignment, const Formula& f) {
  const TermSet universe = quantifier_universe(instance, f);
  Substitution mu = assignment;
  return eval(instance, universe, mu, f);
}

bool models_rules(const Instance& instance, const RuleSet& rules) {
  for (const auto& rule : rules) {
    bool ok = true;
    for_each_match(rule.body, instance, {}, [&](const Substitution& mu) {
      if (!find_match(rule.head, instance, restrict(mu, rule.frontier))) ok = false;
      return ok;
    });
    if (!ok) return false;
  }
  return true;
}

bool models_kb(const Instance& instance, const Database& database, const RuleSet& rules) {
  return instance.includes(database) && models_rules(instance, rules);
}

Formula formula_interpretation(const Sequent& s) {
  std::vector<Formula> gamma(s.antecedent.begin(), s.antecedent.end());
  std::vector<Formula> delta(s.consequent.begin(), s.consequent.end());
  return make_implies(conjunction_of(gamma), disjunction_of(delta));
}

}  // namespace chaseq
