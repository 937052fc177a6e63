#include "chaseq/search.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>

namespace chaseq {

const char* to_string(SearchStrategy s) {
  return s == SearchStrategy::RulesFirst ? "rules-first" : "listed-order";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Proved:
      return "proved";
    case Verdict::Refuted:
      return "refuted";
    case Verdict::Unknown:
      return "unknown";
  }
  return "unknown";
}

bool is_saturated(const Sequent& s, const RuleSet& rules) {
  const Instance gamma = atoms_of(s.antecedent);
  const auto& delta = s.consequent;
  const std::vector<Term> terms = gamma.sorted_terms();
  for (const auto& f : delta) {
    switch (f.kind()) {
      case FormulaKind::Atom:
        if (gamma.contains(f.as_atom())) return false;
        break;
      case FormulaKind::And:
        if (!delta.count(f.left()) && !delta.count(f.right())) return false;
        break;
      case FormulaKind::Exists:
        for (const auto& t : terms) {
          if (!delta.count(substitute(f.body(), t, f.bound_variable()))) return false;
        }
        break;
      case FormulaKind::Not:
        break;
    }
  }
  return models_rules(gamma, rules);
}

Instance extract_counter_model(const Sequent& saturated, const RuleSet& rules) {
  if (!is_saturated(saturated, rules)) {
    throw std::invalid_argument("sequent is not saturated");
  }
  return atoms_of(saturated.antecedent);
}

namespace {

struct Step {
  enum class Kind { Seq, ExistsR, AndR, AndRLeft, Id } kind = Kind::Id;
  std::size_t rule = 0;
  Substitution match;
  Substitution fresh;
  std::vector<Atom> head;
  std::optional<Formula> principal;
  std::optional<Term> witness;
  std::optional<Formula> introduced;  // ExistsR instance; AndRLeft conjunct
  std::shared_ptr<const std::vector<Step>> left;  // AndR: proof of the left premise
  FormulaSet left_used;
  std::optional<Atom> atom;  // Id
};

struct Context {
  const RuleSet& rules;
  SearchOptions options;
  std::size_t fuel_used = 0;
  std::vector<TraceEvent> trace;
};

struct State {
  Instance gamma;
  std::uint64_t version = 0;
  std::vector<Term> terms;
  FormulaSet delta;
  std::optional<Atom> closing;
  FormulaSet pending_and;
  FormulaSet exists_formulas;
  FormulaSet exists_candidates;
  std::map<Formula, std::size_t> scan;
  std::optional<Formula> sticky;
  std::vector<std::vector<Trigger>> pools;
  std::vector<std::size_t> pool_pos;
  std::vector<std::uint64_t> pool_checked;
  std::set<TriggerKey> seen;
  std::size_t cursor = 0;
  std::vector<Step> steps;
  std::size_t depth = 0;
};

struct Result {
  Verdict verdict = Verdict::Unknown;
  std::vector<Step> steps;
  FormulaSet used;
  Instance model;
  Sequent final_sequent;
};

void add_to_delta(State& st, const Formula& f) {
  if (!st.delta.insert(f).second) return;
  for (auto it = st.pending_and.begin(); it != st.pending_and.end();) {
    if (it->left() == f || it->right() == f) {
      it = st.pending_and.erase(it);
    } else {
      ++it;
    }
  }
  switch (f.kind()) {
    case FormulaKind::Atom:
      if (!st.closing && st.gamma.contains(f.as_atom())) st.closing = f.as_atom();
      break;
    case FormulaKind::And:
      if (!st.delta.count(f.left()) && !st.delta.count(f.right())) st.pending_and.insert(f);
      break;
    case FormulaKind::Exists:
      st.exists_formulas.insert(f);
      st.exists_candidates.insert(f);
      st.scan[f] = 0;
      break;
    case FormulaKind::Not:
      break;
  }
}

void discover(State& st, const std::vector<Trigger>& found, const RuleSet& rules) {
  for (const auto& t : found) {
    if (st.seen.insert(trigger_key(t, rules)).second) st.pools[t.rule].push_back(t);
  }
}

void add_to_gamma(State& st, const std::vector<Atom>& atoms, const RuleSet& rules) {
  std::vector<Atom> added;
  for (const auto& a : atoms) {
    if (st.gamma.insert(a)) added.push_back(a);
  }
  if (added.empty()) return;
  ++st.version;
  st.terms = st.gamma.sorted_terms();
  st.exists_candidates = st.exists_formulas;
  for (auto& [f, idx] : st.scan) idx = 0;
  for (const auto& a : added) {
    if (!st.closing && st.delta.count(Formula::atom(a))) st.closing = a;
  }
  discover(st, triggers_touching(st.gamma, added, rules), rules);
}

std::optional<Term> next_term(State& st, const Formula& f) {
  std::size_t& idx = st.scan[f];
  for (; idx < st.terms.size(); ++idx) {
    if (!st.delta.count(substitute(f.body(), st.terms[idx], f.bound_variable()))) {
      return st.terms[idx];
    }
  }
  return std::nullopt;
}

std::optional<std::pair<Formula, Term>> next_exists(State& st) {
  if (st.sticky) {
    if (auto t = next_term(st, *st.sticky)) return std::make_pair(*st.sticky, *t);
    st.exists_candidates.erase(*st.sticky);
    st.sticky.reset();
  }
  for (auto it = st.exists_candidates.begin(); it != st.exists_candidates.end();) {
    if (auto t = next_term(st, *it)) {
      st.sticky = *it;
      return std::make_pair(*it, *t);
    }
    it = st.exists_candidates.erase(it);
  }
  return std::nullopt;
}

bool has_active(State& st, std::size_t r, const RuleSet& rules) {
  auto& pos = st.pool_pos[r];
  const auto& pool = st.pools[r];
  if (st.pool_checked[r] == st.version + 1) return pos < pool.size();
  while (pos < pool.size() && !is_active(pool[pos], st.gamma, rules)) ++pos;
  st.pool_checked[r] = st.version + 1;
  return pos < pool.size();
}

bool any_active(State& st, const RuleSet& rules) {
  for (std::size_t r = 0; r < rules.size(); ++r) {
    if (has_active(st, r, rules)) return true;
  }
  return false;
}

void fire(State& st, Context& ctx) {
  const RuleSet& rules = ctx.rules;
  const std::size_t n = rules.size();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t r = (st.cursor + k) % n;
    if (!has_active(st, r, rules)) continue;
    if (ctx.options.record_trace) {
      TraceEvent ev{TraceEvent::Kind::Seq, r, {}, {}, {}, st.depth};
      for (std::size_t q = 0; q < n; ++q) ev.active_before.push_back(has_active(st, q, rules));
      ctx.trace.push_back(std::move(ev));
    }
    const Trigger trigger = st.pools[r][st.pool_pos[r]];
    Step step;
    step.kind = Step::Kind::Seq;
    step.rule = r;
    step.match = restrict(trigger.match, rules[r].body_vars);
    step.fresh = mint_fresh(rules[r]);
    step.head = instantiate_head(trigger, step.fresh, rules);
    st.cursor = (r + 1) % n;
    ++ctx.fuel_used;
    const std::vector<Atom> head = step.head;
    st.steps.push_back(std::move(step));
    add_to_gamma(st, head, rules);
    return;
  }
  throw std::logic_error("no active rule to fire");
}

/// Drops inferences whose contribution is never used above them. The step
/// list must end in Id.
std::pair<std::vector<Step>, FormulaSet> prune(const std::vector<Step>& steps) {
  FormulaSet used;
  std::vector<Step> kept;
  for (std::size_t i = steps.size(); i-- > 0;) {
    const Step& s = steps[i];
    switch (s.kind) {
      case Step::Kind::Id:
        used.insert(Formula::atom(*s.atom));
        kept.push_back(s);
        break;
      case Step::Kind::Seq:
        kept.push_back(s);
        break;
      case Step::Kind::ExistsR:
        if (used.count(*s.introduced)) {
          used.insert(*s.principal);
          kept.push_back(s);
        }
        break;
      case Step::Kind::AndR:
        if (used.count(s.principal->right())) {
          used.insert(s.left_used.begin(), s.left_used.end());
          used.insert(*s.principal);
          kept.push_back(s);
        }
        break;
      case Step::Kind::AndRLeft:
        if (used.count(*s.introduced)) throw std::logic_error("unprovable conjunct was used");
        break;
    }
  }
  std::reverse(kept.begin(), kept.end());
  return {std::move(kept), std::move(used)};
}

Result finish(Verdict v, State& st) {
  Result r;
  r.verdict = v;
  r.model = st.gamma;
  r.final_sequent = Sequent{as_formulas(st.gamma), st.delta};
  return r;
}

Result proved(std::vector<Step> steps) {
  Result r;
  r.verdict = Verdict::Proved;
  std::tie(r.steps, r.used) = prune(steps);
  return r;
}

Result run(State st, Context& ctx) {
  const RuleSet& rules = ctx.rules;
  const bool rules_first = ctx.options.strategy == SearchStrategy::RulesFirst;
  std::optional<Result> left_unknown;
  auto conclude = [&](Result r) {
    if (left_unknown && r.verdict != Verdict::Refuted) return std::move(*left_unknown);
    return r;
  };
  auto trace = [&](TraceEvent::Kind kind, std::optional<Formula> f, std::optional<Term> t) {
    if (ctx.options.record_trace) {
      ctx.trace.push_back(TraceEvent{kind, 0, {}, std::move(f), std::move(t), st.depth});
    }
  };

  for (;;) {
    if (st.closing) {
      trace(TraceEvent::Kind::Id, Formula::atom(*st.closing), std::nullopt);
      Step id;
      id.kind = Step::Kind::Id;
      id.atom = st.closing;
      st.steps.push_back(std::move(id));
      return conclude(proved(std::move(st.steps)));
    }
    const bool can_fire = ctx.fuel_used < ctx.options.fuel && any_active(st, rules);
    if (rules_first && can_fire) {
      fire(st, ctx);
      continue;
    }
    if (!st.pending_and.empty()) {
      const Formula conj = *st.pending_and.begin();
      const Formula& phi = conj.left();
      const Formula& psi = conj.right();
      trace(TraceEvent::Kind::AndR, conj, std::nullopt);
      if (phi.is_atom() && st.gamma.contains(phi.as_atom())) {
        // Left premise closes at once.
        trace(TraceEvent::Kind::Id, phi, std::nullopt);
        Step leaf;
        leaf.kind = Step::Kind::Id;
        leaf.atom = phi.as_atom();
        Step step;
        step.kind = Step::Kind::AndR;
        step.principal = conj;
        step.left = std::make_shared<const std::vector<Step>>(std::vector<Step>{leaf});
        step.left_used = {phi};
        st.steps.push_back(std::move(step));
        add_to_delta(st, psi);
        continue;
      }
      if (rules_first && phi.is_atom()) {
        // The antecedent can no longer grow, so an atom missing from it can
        // never close: the left branch is this branch with phi recorded.
        Step step;
        step.kind = Step::Kind::AndRLeft;
        step.principal = conj;
        step.introduced = phi;
        st.steps.push_back(std::move(step));
        add_to_delta(st, phi);
        continue;
      }
      State left = st;
      left.steps.clear();
      ++left.depth;
      add_to_delta(left, phi);
      Result lr = run(std::move(left), ctx);
      if (lr.verdict == Verdict::Proved && !lr.used.count(phi)) {
        st.steps.insert(st.steps.end(), lr.steps.begin(), lr.steps.end());
        return conclude(proved(std::move(st.steps)));
      }
      if (lr.verdict == Verdict::Refuted) return lr;
      Step step;
      step.kind = Step::Kind::AndR;
      step.principal = conj;
      if (lr.verdict == Verdict::Proved) {
        step.left = std::make_shared<const std::vector<Step>>(std::move(lr.steps));
        step.left_used = std::move(lr.used);
      } else if (!left_unknown) {
        left_unknown = std::move(lr);
      }
      st.steps.push_back(std::move(step));
      add_to_delta(st, psi);
      continue;
    }
    if (auto next = next_exists(st)) {
      const auto& [f, t] = *next;
      trace(TraceEvent::Kind::ExistsR, f, t);
      Step step;
      step.kind = Step::Kind::ExistsR;
      step.principal = f;
      step.witness = t;
      step.introduced = substitute(f.body(), t, f.bound_variable());
      const Formula introduced = *step.introduced;
      st.steps.push_back(std::move(step));
      add_to_delta(st, introduced);
      continue;
    }
    if (can_fire) {
      fire(st, ctx);
      continue;
    }
    if (any_active(st, rules)) {
      trace(TraceEvent::Kind::OutOfFuel, std::nullopt, std::nullopt);
      return conclude(finish(Verdict::Unknown, st));
    }
    trace(TraceEvent::Kind::Saturated, std::nullopt, std::nullopt);
    return finish(Verdict::Refuted, st);
  }
}

ProofTree build(Sequent cur, const std::vector<Step>& steps, const RuleSet& rules) {
  std::vector<Sequent> conclusions;
  std::vector<RuleLabel> labels;
  std::vector<std::optional<ProofTree>> lefts;
  std::optional<ProofTree> leaf;
  for (const auto& s : steps) {
    if (s.kind == Step::Kind::Id) {
      leaf = ProofTree{cur, RuleLabel::id(*s.atom), {}};
      break;
    }
    conclusions.push_back(cur);
    lefts.emplace_back();
    switch (s.kind) {
      case Step::Kind::Seq:
        labels.push_back(RuleLabel::seq_rule(rules[s.rule].id, s.match, s.fresh));
        for (const auto& a : s.head) cur.antecedent.insert(Formula::atom(a));
        break;
      case Step::Kind::ExistsR:
        labels.push_back(RuleLabel::exists_right(*s.principal, *s.witness));
        cur.consequent.insert(*s.introduced);
        break;
      case Step::Kind::AndR: {
        labels.push_back(RuleLabel::and_right(*s.principal, true));
        Sequent l = cur;
        l.consequent.insert(s.principal->left());
        lefts.back() = build(std::move(l), *s.left, rules);
        cur.consequent.insert(s.principal->right());
        break;
      }
      default:
        throw std::logic_error("unexpected step in a pruned trace");
    }
  }
  if (!leaf) throw std::logic_error("pruned trace does not end in id");
  ProofTree tree = std::move(*leaf);
  for (std::size_t i = labels.size(); i-- > 0;) {
    ProofTree node{std::move(conclusions[i]), std::move(labels[i]), {}};
    if (lefts[i]) node.premises.push_back(std::move(*lefts[i]));
    node.premises.push_back(std::move(tree));
    tree = std::move(node);
  }
  return tree;
}

}  // namespace

SearchOutcome prove_sequent(const Sequent& goal, const RuleSet& rules,
                            const SearchOptions& options) {
  if (goal.consequent.size() != 1) {
    throw std::invalid_argument("consequent must be a single query");
  }
  if (!as_bcq(*goal.consequent.begin())) {
    throw std::invalid_argument("consequent is not a conjunctive query");
  }
  const Instance database = atoms_of(goal.antecedent);
  if (!database.is_ground()) throw std::invalid_argument("database must be ground");

  Context ctx{rules, options, 0, {}};
  State st;
  st.gamma = database;
  st.terms = database.sorted_terms();
  st.pools.resize(rules.size());
  st.pool_pos.assign(rules.size(), 0);
  st.pool_checked.assign(rules.size(), 0);
  discover(st, find_triggers(database, rules), rules);
  add_to_delta(st, *goal.consequent.begin());

  Result r = run(std::move(st), ctx);
  SearchOutcome out;
  out.verdict = r.verdict;
  out.steps_used = ctx.fuel_used;
  out.trace = std::move(ctx.trace);
  if (r.verdict == Verdict::Proved) {
    out.proof = build(goal, r.steps, rules);
  } else {
    out.model = std::move(r.model);
    out.final_sequent = std::move(r.final_sequent);
  }
  return out;
}

SearchOutcome prove(const Database& database, const RuleSet& rules, const BCQ& query,
                    const SearchOptions& options) {
  if (!database.is_ground()) throw std::invalid_argument("database must be ground");
  return prove_sequent(Sequent{as_formulas(database), {query.to_formula()}}, rules, options);
}

}  // namespace chaseq
