#include "chaseq/bridge.hpp"

#include <algorithm>
#include <stdexcept>

namespace chaseq {

namespace {

std::size_t rule_index(const RuleSet& rules, const std::string& id) {
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (rules[i].id == id) return i;
  }
  throw std::invalid_argument("unknown rule " + id);
}

Formula rename_formula(const Formula& f, const Substitution& map) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      return Formula::atom(apply_subst(map, f.as_atom()));
    case FormulaKind::Not:
      return Formula::negation(rename_formula(f.body(), map));
    case FormulaKind::And:
      return Formula::conjunction(rename_formula(f.left(), map), rename_formula(f.right(), map));
    case FormulaKind::Exists: {
      if (!map.count(f.bound_variable())) {
        return Formula::exists(f.bound_variable(), rename_formula(f.body(), map));
      }
      Substitution inner = map;
      inner.erase(f.bound_variable());
      return Formula::exists(f.bound_variable(), rename_formula(f.body(), inner));
    }
  }
  return f;
}

FormulaSet rename_set(const FormulaSet& set, const Substitution& map) {
  FormulaSet out;
  for (const auto& f : set) out.insert(rename_formula(f, map));
  return out;
}

Substitution rename_values(const Substitution& s, const Substitution& map) {
  Substitution out;
  for (const auto& [k, v] : s) out.emplace(k, apply_subst(map, v));
  return out;
}

void rename_in_place(ProofTree& tree, const Substitution& map) {
  std::vector<ProofTree*> stack{&tree};
  while (!stack.empty()) {
    ProofTree* t = stack.back();
    stack.pop_back();
    t->conclusion.antecedent = rename_set(t->conclusion.antecedent, map);
    t->conclusion.consequent = rename_set(t->conclusion.consequent, map);
    RuleLabel& l = t->label;
    if (l.principal) l.principal = rename_formula(*l.principal, map);
    if (l.witness) l.witness = apply_subst(map, *l.witness);
    if (l.eigen) l.eigen = apply_subst(map, *l.eigen);
    l.match = rename_values(l.match, map);
    l.fresh = rename_values(l.fresh, map);
    for (auto& p : t->premises) stack.push_back(&p);
  }
}

/// Adds `atoms` to every antecedent of the subtree.
void weaken_antecedent(ProofTree& tree, const std::vector<Formula>& atoms) {
  std::vector<ProofTree*> stack{&tree};
  while (!stack.empty()) {
    ProofTree* t = stack.back();
    stack.pop_back();
    t->conclusion.antecedent.insert(atoms.begin(), atoms.end());
    for (auto& p : t->premises) stack.push_back(&p);
  }
}

/// Every variable mentioned anywhere in the subtree.
TermSet variables_of(const ProofTree& tree) {
  TermSet out;
  std::vector<const ProofTree*> stack{&tree};
  while (!stack.empty()) {
    const ProofTree* t = stack.back();
    stack.pop_back();
    for (const auto* side : {&t->conclusion.antecedent, &t->conclusion.consequent}) {
      for (const auto& f : *side) {
        for (const auto& v : all_variables(f)) out.insert(v);
      }
    }
    const RuleLabel& l = t->label;
    if (l.eigen) out.insert(*l.eigen);
    for (const auto& [k, v] : l.fresh) out.insert(v);
    for (const auto& p : t->premises) stack.push_back(&p);
  }
  return out;
}

}  // namespace

RDerivation chase_to_r_derivation(const ChaseDerivation& d, const RuleSet& rules) {
  std::string why;
  if (!d.validate(rules, &why)) throw std::invalid_argument("invalid chase derivation: " + why);
  RDerivation chain;
  Sequent cur{as_formulas(d.initial()), {}};
  chain.sequents.push_back(cur);
  for (const auto& step : d.steps()) {
    const auto& rule = rules[step.trigger.rule];
    chain.labels.push_back(
        RuleLabel::seq_rule(rule.id, restrict(step.trigger.match, rule.body_vars), step.fresh));
    for (const auto& a : instantiate_head(step.trigger, step.fresh, rules)) {
      cur.antecedent.insert(Formula::atom(a));
    }
    chain.sequents.push_back(cur);
  }
  return chain;
}

ChaseDerivation r_derivation_to_chase(const RDerivation& chain, const RuleSet& rules) {
  if (chain.sequents.empty()) throw std::invalid_argument("chain has no sequents");
  if (!is_r_derivation(chain)) throw std::invalid_argument("chain uses non-rule inferences");
  for (const auto& s : chain.sequents) {
    if (!s.consequent.empty()) throw std::invalid_argument("chain has a non-empty consequent");
    for (const auto& f : s.antecedent) {
      if (!f.is_atom()) throw std::invalid_argument("chain has a non-atomic antecedent");
    }
  }
  if (InferenceCheck c = check_chain(chain, rules); !c) {
    throw std::invalid_argument("invalid chain: " + c.message);
  }
  ChaseDerivation d(atoms_of(chain.root().antecedent));
  for (const auto& label : chain.labels) {
    const std::size_t r = rule_index(rules, label.rule_id);
    d.push(Trigger{r, restrict(label.match, rules[r].body_vars)}, label.fresh, rules);
  }
  if (!(d.final_instance() == atoms_of(chain.top().antecedent))) {
    throw std::invalid_argument("chain top differs from the replayed instance");
  }
  return d;
}

RDerivation weaken_consequent(const RDerivation& chain, const FormulaSet& delta) {
  if (!is_r_derivation(chain)) throw std::invalid_argument("chain uses non-rule inferences");
  TermSet minted;
  for (const auto& l : chain.labels) {
    for (const auto& [z, y] : l.fresh) minted.insert(y);
  }
  for (const auto& f : delta) {
    for (const auto& v : free_vars(f)) {
      if (minted.count(v)) {
        throw std::invalid_argument("variable " + v.name() + " is introduced by the chain");
      }
    }
  }
  RDerivation out = chain;
  for (auto& s : out.sequents) s.consequent = delta;
  return out;
}

ProofTree witness_to_proof(const ChaseDerivation& d, const Substitution& mu, const BCQ& query,
                           const RuleSet& rules) {
  const Instance& final_instance = d.final_instance();
  for (const auto& v : query.vars) {
    if (!mu.count(v)) throw std::invalid_argument("witness misses variable " + v.name());
  }
  for (const auto& a : query.atoms) {
    if (!final_instance.contains(apply_subst(mu, a))) {
      throw std::invalid_argument("witness does not map the query into the final instance");
    }
  }
  const Formula q = query.to_formula();
  RDerivation chain = weaken_consequent(chase_to_r_derivation(d, rules), {q});

  // Exists-right chain down to the instantiated matrix.
  std::vector<Sequent> conclusions;
  std::vector<RuleLabel> labels;
  Sequent cur = chain.top();
  Formula f = q;
  for (const auto& v : query.vars) {
    conclusions.push_back(cur);
    labels.push_back(RuleLabel::exists_right(f, mu.at(v)));
    f = substitute(f.body(), mu.at(v), v);
    cur.consequent.insert(f);
  }

  // Right-associated and-right fan-out with id leaves; the principal is not
  // repeated in the premises.
  std::function<ProofTree(Sequent, const Formula&)> fan = [&](Sequent s, const Formula& g) {
    if (g.is_atom()) return ProofTree{std::move(s), RuleLabel::id(g.as_atom()), {}};
    Sequent base = s;
    base.consequent.erase(g);
    Sequent left = base;
    Sequent right = base;
    left.consequent.insert(g.left());
    right.consequent.insert(g.right());
    ProofTree node{std::move(s), RuleLabel::and_right(g, false), {}};
    node.premises.push_back(fan(std::move(left), g.left()));
    node.premises.push_back(fan(std::move(right), g.right()));
    return node;
  };
  ProofTree top = fan(cur, f);
  for (std::size_t i = labels.size(); i-- > 0;) {
    ProofTree node{std::move(conclusions[i]), std::move(labels[i]), {}};
    node.premises.push_back(std::move(top));
    top = std::move(node);
  }
  return stitch(chain, std::move(top));
}

bool is_normal(const ProofTree& proof) {
  const ProofTree* t = &proof;
  while (t->label.kind == RuleKind::SeqRule && t->premises.size() == 1) t = &t->premises[0];
  for (const auto* l : labels_of(*t)) {
    if (l->kind == RuleKind::SeqRule) return false;
  }
  return true;
}

namespace {

struct Normalizer {
  const RuleSet& rules;
  std::size_t budget;
  std::size_t swaps = 0;

  void count_swap() {
    if (++swaps > budget) throw std::logic_error("normalization exceeded its step bound");
  }

  void verify(const ProofTree& node) const {
    std::vector<Sequent> premises;
    for (const auto& p : node.premises) premises.push_back(p.conclusion);
    if (InferenceCheck c = check_inference(node.conclusion, node.label, premises, rules); !c) {
      throw std::logic_error(std::string("permutation produced an invalid inference: ") +
                             c.message);
    }
  }

  // Returns a normal proof of the same conclusion.
  ProofTree run(ProofTree node) {
    switch (node.label.kind) {
      case RuleKind::Id:
        return node;
      case RuleKind::SeqRule: {
        // Walk the rule block iteratively, then normalize what sits above it.
        std::vector<ProofTree> block;
        ProofTree* t = &node;
        while (t->label.kind == RuleKind::SeqRule) {
          ProofTree above = std::move(t->premises[0]);
          t->premises.clear();
          block.push_back(std::move(*t));
          node = std::move(above);
          t = &node;
        }
        ProofTree top = run(std::move(node));
        for (std::size_t i = block.size(); i-- > 0;) {
          block[i].premises.push_back(std::move(top));
          top = std::move(block[i]);
        }
        return top;
      }
      case RuleKind::ExistsR:
      case RuleKind::AndR:
        break;
      default:
        throw std::invalid_argument("proof leaves the query fragment");
    }
    for (auto& p : node.premises) p = run(std::move(p));
    for (std::size_t i = 0; i < node.premises.size(); ++i) {
      if (node.premises[i].label.kind != RuleKind::SeqRule) continue;
      return pull_down(std::move(node), i);
    }
    return node;
  }

  // node's premise i is a rule inference S; returns S' over node'.
  ProofTree pull_down(ProofTree node, std::size_t i) {
    count_swap();
    ProofTree s = std::move(node.premises[i]);
    // The rule's fresh names move into the other branches' antecedents.
    TermSet elsewhere;
    for (std::size_t j = 0; j < node.premises.size(); ++j) {
      if (j == i) continue;
      for (const auto& v : variables_of(node.premises[j])) elsewhere.insert(v);
    }
    Substitution renaming;
    for (const auto& [z, y] : s.label.fresh) {
      if (elsewhere.count(y)) renaming.emplace(y, Term::fresh());
    }
    if (!renaming.empty()) rename_in_place(s, renaming);

    ProofTree above = std::move(s.premises[0]);
    std::vector<Formula> added;
    for (const auto& f : above.conclusion.antecedent) {
      if (!s.conclusion.antecedent.count(f)) added.push_back(f);
    }
    ProofTree lowered{node.conclusion, std::move(s.label), {}};
    node.conclusion.antecedent.insert(added.begin(), added.end());
    for (std::size_t j = 0; j < node.premises.size(); ++j) {
      if (j == i) {
        node.premises[j] = std::move(above);
      } else {
        weaken_antecedent(node.premises[j], added);
      }
    }
    verify(node);
    lowered.premises.push_back(run(std::move(node)));
    verify(lowered);
    return lowered;
  }
};

}  // namespace

ProofTree normalize_proof(const ProofTree& proof, const RuleSet& rules) {
  if (proof.conclusion.consequent.size() != 1 || !as_bcq(*proof.conclusion.consequent.begin())) {
    throw std::invalid_argument("end-sequent consequent is not a single query");
  }
  for (const auto& f : proof.conclusion.antecedent) {
    if (!f.is_atom()) throw std::invalid_argument("end-sequent antecedent is not atomic");
  }
  const std::size_t n = proof.node_count();
  Normalizer norm{rules, n * n + 1};
  return norm.run(proof);
}

std::pair<ChaseDerivation, Substitution> proof_to_witness(const ProofTree& proof,
                                                          const RuleSet& rules) {
  if (!is_normal(proof)) throw std::invalid_argument("proof is not in normal form");
  if (proof.conclusion.consequent.size() != 1) {
    throw std::invalid_argument("end-sequent consequent is not a single query");
  }
  const Formula q = *proof.conclusion.consequent.begin();
  const auto query = as_bcq(q);
  if (!query) throw std::invalid_argument("end-sequent consequent is not a query");

  RDerivation chain;
  const ProofTree* t = &proof;
  chain.sequents.push_back(Sequent{t->conclusion.antecedent, {}});
  while (t->label.kind == RuleKind::SeqRule) {
    chain.labels.push_back(t->label);
    t = &t->premises.at(0);
    chain.sequents.push_back(Sequent{t->conclusion.antecedent, {}});
  }
  ChaseDerivation d = r_derivation_to_chase(chain, rules);

  // Follow exists-right witnesses from the query down to matrix instances.
  std::map<Formula, Substitution> reached{{q, {}}};
  std::vector<Substitution> complete;
  if (query->vars.empty()) complete.push_back({});
  for (const auto* l : labels_of(*t)) {
    if (l->kind != RuleKind::ExistsR) continue;
    auto it = reached.find(*l->principal);
    if (it == reached.end()) continue;
    Substitution sigma = it->second;
    sigma[l->principal->bound_variable()] = *l->witness;
    const Formula inst =
        substitute(l->principal->body(), *l->witness, l->principal->bound_variable());
    if (reached.emplace(inst, sigma).second && sigma.size() == query->vars.size()) {
      complete.push_back(sigma);
    }
  }
  for (const auto& sigma : complete) {
    bool inside = true;
    for (const auto& a : query->atoms) {
      if (!d.final_instance().contains(apply_subst(sigma, a))) {
        inside = false;
        break;
      }
    }
    if (inside) return {std::move(d), sigma};
  }
  throw std::invalid_argument("no query instance of the proof lies in the final instance");
}

std::vector<std::string> rule_multiset(const ProofTree& proof) {
  std::vector<std::string> out;
  for (const auto* l : labels_of(proof)) {
    if (l->kind == RuleKind::SeqRule) out.push_back(l->rule_id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

ProofTree rename_proof(const ProofTree& proof, const Substitution& renaming) {
  ProofTree out = proof;
  rename_in_place(out, renaming);
  return out;
}

}  // namespace chaseq
