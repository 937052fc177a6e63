#include "chaseq/parallel.hpp"

#include <algorithm>
#include <omp.h>

namespace chaseq {

namespace {

// Binds the variables of `pattern` so that it equals `fact`, if possible.
bool unify(const Atom& pattern, const Atom& fact, Substitution& out) {
  if (pattern.predicate != fact.predicate || pattern.arity() != fact.arity()) return false;
  for (std::size_t i = 0; i < pattern.arity(); ++i) {
    const Term& p = pattern.args[i];
    if (p.is_constant()) {
      if (!(p == fact.args[i])) return false;
      continue;
    }
    auto [it, inserted] = out.emplace(p, fact.args[i]);
    if (!inserted && !(it->second == fact.args[i])) return false;
  }
  return true;
}

}  // namespace

std::vector<Trigger> find_triggers_parallel(const Instance& instance, const RuleSet& rules) {
  // One task per (rule, fact matching the rule's first body atom).
  struct Task {
    std::size_t rule;
    const Atom* fact;
  };
  std::vector<Task> tasks;
  for (std::size_t r = 0; r < rules.size(); ++r) {
    if (rules[r].body.empty()) continue;
    auto [lo, hi] = instance.with_predicate(rules[r].body.front().predicate);
    for (auto it = lo; it != hi; ++it) tasks.push_back({r, &*it});
  }
  std::vector<std::vector<Trigger>> found(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t i) {
    const auto& rule = rules[tasks[i].rule];
    Substitution seed;
    if (!unify(rule.body.front(), *tasks[i].fact, seed)) return;
    for_each_match(rule.body, instance, seed, [&](const Substitution& mu) {
      found[i].push_back(Trigger{tasks[i].rule, mu});
      return true;
    });
  });
  std::vector<std::pair<TriggerKey, Trigger>> keyed;
  for (auto& part : found) {
    for (auto& t : part) keyed.emplace_back(trigger_key(t, rules), std::move(t));
  }
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  keyed.erase(std::unique(keyed.begin(), keyed.end(),
                          [](const auto& a, const auto& b) { return a.first == b.first; }),
              keyed.end());
  std::vector<Trigger> out;
  out.reserve(keyed.size());
  for (auto& [key, t] : keyed) out.push_back(std::move(t));
  return out;
}

int worker_count() { return omp_get_max_threads(); }

}  // namespace chaseq
