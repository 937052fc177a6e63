#include "chaseq/chase.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

namespace chaseq {

TriggerKey trigger_key(const Trigger& t, const RuleSet& rules) {
  TriggerKey key{t.rule, {}};
  for (const auto& v : rules.at(t.rule).body_vars) key.second.push_back(apply_subst(t.match, v));
  return key;
}

std::vector<Trigger> find_triggers(const Instance& instance, const RuleSet& rules) {
  std::vector<Trigger> out;
  for (std::size_t r = 0; r < rules.size(); ++r) {
    std::vector<std::pair<TriggerKey, Trigger>> found;
    for_each_match(rules[r].body, instance, {}, [&](const Substitution& mu) {
      Trigger t{r, mu};
      found.emplace_back(trigger_key(t, rules), std::move(t));
      return true;
    });
    std::sort(found.begin(), found.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [key, t] : found) out.push_back(std::move(t));
  }
  return out;
}

bool is_trigger(const Trigger& t, const Instance& instance, const RuleSet& rules) {
  if (t.rule >= rules.size()) return false;
  const auto& rule = rules[t.rule];
  for (const auto& v : rule.body_vars) {
    if (!t.match.count(v)) return false;
  }
  for (const auto& a : rule.body) {
    if (!instance.contains(apply_subst(t.match, a))) return false;
  }
  return true;
}

bool is_active(const Trigger& t, const Instance& instance, const RuleSet& rules) {
  const auto& rule = rules.at(t.rule);
  return !find_match(rule.head, instance, restrict(t.match, rule.frontier)).has_value();
}

Substitution mint_fresh(const ExistentialRule& rule) {
  Substitution fresh;
  for (const auto& z : rule.existentials) fresh.emplace(z, Term::fresh());
  return fresh;
}

std::vector<Atom> instantiate_head(const Trigger& t, const Substitution& fresh,
                                   const RuleSet& rules) {
  const auto& rule = rules.at(t.rule);
  Substitution full = restrict(t.match, rule.frontier);
  for (const auto& z : rule.existentials) {
    auto it = fresh.find(z);
    if (it == fresh.end()) throw std::invalid_argument("no fresh name for " + z.name());
    full.emplace(z, it->second);
  }
  return apply_subst(full, rule.head);
}

Application apply_trigger_in_place(const Trigger& t, Instance& instance, const RuleSet& rules) {
  if (!is_trigger(t, instance, rules)) {
    throw std::invalid_argument("not a trigger in the instance");
  }
  Application app;
  app.fresh = mint_fresh(rules[t.rule]);
  app.head_atoms = instantiate_head(t, app.fresh, rules);
  for (const auto& a : app.head_atoms) instance.insert(a);
  return app;
}

Instance apply_trigger(const Trigger& t, const Instance& instance, const RuleSet& rules) {
  Instance out = instance;
  apply_trigger_in_place(t, out, rules);
  return out;
}

Instance one_step_chase(const Instance& instance, const RuleSet& rules) {
  Instance out = instance;
  for (const auto& t : find_triggers(instance, rules)) {
    const auto head = instantiate_head(t, mint_fresh(rules[t.rule]), rules);
    for (const auto& a : head) out.insert(a);
  }
  return out;
}

// ---------------------------------------------------------------------------
// ChaseDerivation

void ChaseDerivation::push(const Trigger& trigger, const Substitution& fresh,
                           const RuleSet& rules) {
  if (!is_trigger(trigger, final_, rules)) {
    throw std::invalid_argument("derivation step is not a trigger in the current instance");
  }
  const auto& rule = rules[trigger.rule];
  TermSet images;
  for (const auto& z : rule.existentials) {
    auto it = fresh.find(z);
    if (it == fresh.end() || !it->second.is_variable() || final_.contains_term(it->second) ||
        !images.insert(it->second).second) {
      throw std::invalid_argument("derivation step uses a non-fresh variable for " + z.name());
    }
  }
  push_unchecked(ChaseStep{trigger, restrict(fresh, rule.existentials), {}},
                 instantiate_head(trigger, fresh, rules));
}

void ChaseDerivation::push_unchecked(ChaseStep step, const std::vector<Atom>& head_atoms) {
  step.added.clear();
  for (const auto& a : head_atoms) {
    if (final_.insert(a)) step.added.push_back(a);
  }
  steps_.push_back(std::move(step));
}

std::vector<Instance> ChaseDerivation::instances() const {
  std::vector<Instance> out;
  out.reserve(steps_.size() + 1);
  Instance cur = initial_;
  out.push_back(cur);
  for (const auto& s : steps_) {
    for (const auto& a : s.added) cur.insert(a);
    out.push_back(cur);
  }
  return out;
}

Instance ChaseDerivation::instance_at(std::size_t index) const {
  if (index > steps_.size()) throw std::out_of_range("derivation index");
  Instance cur = initial_;
  for (std::size_t i = 0; i < index; ++i) {
    for (const auto& a : steps_[i].added) cur.insert(a);
  }
  return cur;
}

bool ChaseDerivation::validate(const RuleSet& rules, std::string* why) const {
  auto fail = [&](std::size_t i, const std::string& msg) {
    if (why) *why = "step " + std::to_string(i) + ": " + msg;
    return false;
  };
  Instance cur = initial_;
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    const auto& s = steps_[i];
    if (!is_trigger(s.trigger, cur, rules)) return fail(i, "not a trigger");
    const auto& rule = rules[s.trigger.rule];
    TermSet images;
    for (const auto& z : rule.existentials) {
      auto it = s.fresh.find(z);
      if (it == s.fresh.end()) return fail(i, "missing fresh name");
      if (!it->second.is_variable() || cur.contains_term(it->second) ||
          !images.insert(it->second).second) {
        return fail(i, "variable " + it->second.name() + " is not fresh");
      }
    }
    std::vector<Atom> added;
    for (const auto& a : instantiate_head(s.trigger, s.fresh, rules)) {
      if (cur.insert(a)) added.push_back(a);
    }
    if (added != s.added) return fail(i, "recorded atoms differ from the trigger application");
  }
  if (!(cur == final_)) return fail(steps_.size(), "final instance mismatch");
  return true;
}

// ---------------------------------------------------------------------------
// Fixpoint loop

std::vector<Trigger> triggers_touching(const Instance& instance, const std::vector<Atom>& delta,
                                       const RuleSet& rules) {
  std::vector<Trigger> out;
  for (std::size_t r = 0; r < rules.size(); ++r) {
    const auto& body = rules[r].body;
    std::set<TriggerKey> seen;
    std::vector<std::pair<TriggerKey, Trigger>> found;
    for (std::size_t pos = 0; pos < body.size(); ++pos) {
      for (const auto& fact : delta) {
        Substitution seed;
        const Atom& pat = body[pos];
        if (pat.predicate != fact.predicate || pat.arity() != fact.arity()) continue;
        bool ok = true;
        for (std::size_t k = 0; k < pat.args.size() && ok; ++k) {
          const Term& p = pat.args[k];
          if (p.is_constant()) {
            ok = p == fact.args[k];
          } else if (auto [it, inserted] = seed.emplace(p, fact.args[k]); !inserted) {
            ok = it->second == fact.args[k];
          }
        }
        if (!ok) continue;
        for_each_match(body, instance, seed, [&](const Substitution& mu) {
          Trigger t{r, mu};
          TriggerKey key = trigger_key(t, rules);
          if (seen.insert(key).second) found.emplace_back(std::move(key), std::move(t));
          return true;
        });
      }
    }
    std::sort(found.begin(), found.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [key, t] : found) out.push_back(std::move(t));
  }
  return out;
}

ChaseOutcome chase(const Database& database, const RuleSet& rules, std::size_t fuel,
                   const ChaseObserver& observer) {
  ChaseOutcome out;
  out.derivation = ChaseDerivation(database);
  Instance current = database;
  std::set<TriggerKey> fired_or_queued;
  std::deque<Trigger> queue;

  auto discover = [&](std::vector<Trigger> candidates) {
    for (auto& t : candidates) {
      if (!fired_or_queued.insert(trigger_key(t, rules)).second) continue;
      // Inactive triggers stay inactive as the instance only grows.
      if (is_active(t, current, rules)) queue.push_back(std::move(t));
    }
  };
  discover(find_triggers(current, rules));

  bool stopped = false;
  while (!queue.empty() && out.steps_used < fuel && !stopped) {
    Trigger t = std::move(queue.front());
    queue.pop_front();
    if (!is_active(t, current, rules)) continue;
    Application app = apply_trigger_in_place(t, current, rules);
    ChaseStep step{t, app.fresh, {}};
    out.derivation.push_unchecked(step, app.head_atoms);
    ++out.steps_used;
    const ChaseStep& recorded = out.derivation.steps().back();
    if (observer && observer(current, recorded)) stopped = true;
    discover(triggers_touching(current, recorded.added, rules));
  }
  while (!queue.empty() && !is_active(queue.front(), current, rules)) queue.pop_front();
  out.terminated = queue.empty();
  out.final_instance = std::move(current);
  return out;
}

const char* to_string(Entailment e) {
  switch (e) {
    case Entailment::Yes:
      return "yes";
    case Entailment::No:
      return "no";
    case Entailment::Unknown:
      return "unknown";
  }
  return "unknown";
}

ChaseAnswer bcq_entailed_by_chase(const Database& database, const RuleSet& rules, const BCQ& query,
                                  std::size_t fuel) {
  ChaseAnswer answer;
  if (auto mu = find_match(query.atoms, database)) {
    answer.verdict = Entailment::Yes;
    answer.witness = restrict(*mu, query.vars);
    answer.run.final_instance = database;
    answer.run.derivation = ChaseDerivation(database);
    const auto triggers = find_triggers(database, rules);
    answer.run.terminated = std::none_of(triggers.begin(), triggers.end(), [&](const Trigger& t) {
      return is_active(t, database, rules);
    });
    return answer;
  }
  std::set<std::string> query_predicates;
  for (const auto& a : query.atoms) query_predicates.insert(a.predicate);

  answer.run = chase(database, rules, fuel, [&](const Instance& current, const ChaseStep& step) {
    const bool relevant = std::any_of(step.added.begin(), step.added.end(), [&](const Atom& a) {
      return query_predicates.count(a.predicate) != 0;
    });
    if (!relevant) return false;
    if (auto mu = find_match(query.atoms, current)) {
      answer.witness = restrict(*mu, query.vars);
      return true;
    }
    return false;
  });
  if (answer.witness) {
    answer.verdict = Entailment::Yes;
  } else {
    answer.verdict = answer.run.terminated ? Entailment::No : Entailment::Unknown;
  }
  return answer;
}

}  // namespace chaseq
