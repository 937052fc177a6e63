#include "chaseq/calculus.hpp"

#include <utility>

namespace chaseq {

const char* to_string(RuleKind k) {
  switch (k) {
    case RuleKind::Id:
      return "id";
    case RuleKind::NegL:
      return "negl";
    case RuleKind::NegR:
      return "negr";
    case RuleKind::AndL:
      return "andl";
    case RuleKind::AndR:
      return "andr";
    case RuleKind::ExistsL:
      return "existsl";
    case RuleKind::ExistsR:
      return "existsr";
    case RuleKind::SeqRule:
      return "seq";
  }
  return "?";
}

const char* to_string(Rejection r) {
  switch (r) {
    case Rejection::None:
      return "ok";
    case Rejection::WrongPremiseCount:
      return "wrong premise count";
    case Rejection::ShapeMismatch:
      return "shape mismatch";
    case Rejection::FreshnessViolation:
      return "freshness violation";
    case Rejection::WitnessOutsideUniverse:
      return "witness not a term of the sequent's term universe";
    case Rejection::UnknownRule:
      return "unknown rule";
  }
  return "?";
}

RuleLabel RuleLabel::id(const Atom& shared) {
  RuleLabel l;
  l.kind = RuleKind::Id;
  l.principal = Formula::atom(shared);
  return l;
}

RuleLabel RuleLabel::unary(RuleKind kind, Formula principal, bool keep) {
  RuleLabel l;
  l.kind = kind;
  l.principal = std::move(principal);
  l.keep_principal = keep;
  return l;
}

RuleLabel RuleLabel::and_right(Formula principal, bool keep) {
  return unary(RuleKind::AndR, std::move(principal), keep);
}

RuleLabel RuleLabel::exists_left(Formula principal, Term eigen, bool keep) {
  RuleLabel l = unary(RuleKind::ExistsL, std::move(principal), keep);
  l.eigen = std::move(eigen);
  return l;
}

RuleLabel RuleLabel::exists_right(Formula principal, Term witness) {
  RuleLabel l = unary(RuleKind::ExistsR, std::move(principal), true);
  l.witness = std::move(witness);
  return l;
}

RuleLabel RuleLabel::seq_rule(std::string rule_id, Substitution match, Substitution fresh) {
  RuleLabel l;
  l.kind = RuleKind::SeqRule;
  l.rule_id = std::move(rule_id);
  l.match = std::move(match);
  l.fresh = std::move(fresh);
  return l;
}

std::size_t ProofTree::node_count() const {
  std::size_t n = 0;
  std::vector<const ProofTree*> stack{this};
  while (!stack.empty()) {
    const ProofTree* t = stack.back();
    stack.pop_back();
    ++n;
    for (const auto& p : t->premises) stack.push_back(&p);
  }
  return n;
}

namespace {

ExpectedPremises reject(Rejection r, std::string msg) {
  ExpectedPremises out;
  out.status.reason = r;
  out.status.message = std::move(msg);
  return out;
}

ExpectedPremises accept(std::vector<Sequent> premises) {
  ExpectedPremises out;
  out.premises = std::move(premises);
  return out;
}

bool has_principal(const RuleLabel& label, FormulaKind kind) {
  return label.principal && label.principal->kind() == kind;
}

FormulaSet without(FormulaSet set, const Formula& f, bool keep) {
  if (!keep) set.erase(f);
  return set;
}

}  // namespace

ExpectedPremises expected_premises(const Sequent& s, const RuleLabel& label, const RuleSet& rules,
                                   const CheckOptions& options) {
  const auto& gamma = s.antecedent;
  const auto& delta = s.consequent;
  switch (label.kind) {
    case RuleKind::Id: {
      if (!has_principal(label, FormulaKind::Atom)) {
        return reject(Rejection::ShapeMismatch, "id needs an atom");
      }
      if (!gamma.count(*label.principal) || !delta.count(*label.principal)) {
        return reject(Rejection::ShapeMismatch, "id atom not on both sides");
      }
      return accept({});
    }
    case RuleKind::NegL: {
      if (!has_principal(label, FormulaKind::Not) || !gamma.count(*label.principal)) {
        return reject(Rejection::ShapeMismatch, "negl principal not in antecedent");
      }
      Sequent p{without(gamma, *label.principal, label.keep_principal), delta};
      p.consequent.insert(label.principal->body());
      return accept({p});
    }
    case RuleKind::NegR: {
      if (!has_principal(label, FormulaKind::Not) || !delta.count(*label.principal)) {
        return reject(Rejection::ShapeMismatch, "negr principal not in consequent");
      }
      Sequent p{gamma, without(delta, *label.principal, label.keep_principal)};
      p.antecedent.insert(label.principal->body());
      return accept({p});
    }
    case RuleKind::AndL: {
      if (!has_principal(label, FormulaKind::And) || !gamma.count(*label.principal)) {
        return reject(Rejection::ShapeMismatch, "andl principal not in antecedent");
      }
      Sequent p{without(gamma, *label.principal, label.keep_principal), delta};
      p.antecedent.insert(label.principal->left());
      p.antecedent.insert(label.principal->right());
      return accept({p});
    }
    case RuleKind::AndR: {
      if (!has_principal(label, FormulaKind::And) || !delta.count(*label.principal)) {
        return reject(Rejection::ShapeMismatch, "andr principal not in consequent");
      }
      Sequent left{gamma, without(delta, *label.principal, label.keep_principal)};
      Sequent right = left;
      left.consequent.insert(label.principal->left());
      right.consequent.insert(label.principal->right());
      return accept({left, right});
    }
    case RuleKind::ExistsL: {
      if (!has_principal(label, FormulaKind::Exists) || !gamma.count(*label.principal)) {
        return reject(Rejection::ShapeMismatch, "existsl principal not in antecedent");
      }
      if (!label.eigen || !label.eigen->is_variable()) {
        return reject(Rejection::FreshnessViolation, "existsl needs a variable");
      }
      if (terms_of(s).count(*label.eigen)) {
        return reject(Rejection::FreshnessViolation,
                      "variable " + label.eigen->name() + " occurs in the conclusion");
      }
      Sequent p{without(gamma, *label.principal, label.keep_principal), delta};
      p.antecedent.insert(
          substitute(label.principal->body(), *label.eigen, label.principal->bound_variable()));
      return accept({p});
    }
    case RuleKind::ExistsR: {
      if (!has_principal(label, FormulaKind::Exists) || !delta.count(*label.principal)) {
        return reject(Rejection::ShapeMismatch, "existsr principal not in consequent");
      }
      if (!label.witness) return reject(Rejection::ShapeMismatch, "existsr without witness");
      if (!options.permissive_witness && !terms_of(s).count(*label.witness)) {
        return reject(Rejection::WitnessOutsideUniverse,
                      "witness " + label.witness->name() + " is not a term of the conclusion");
      }
      Sequent p = s;
      p.consequent.insert(
          substitute(label.principal->body(), *label.witness, label.principal->bound_variable()));
      return accept({p});
    }
    case RuleKind::SeqRule: {
      const ExistentialRule* rule = find_rule(rules, label.rule_id);
      if (!rule) return reject(Rejection::UnknownRule, "no rule named " + label.rule_id);
      for (const auto& v : rule->body_vars) {
        if (!label.match.count(v)) {
          return reject(Rejection::ShapeMismatch, "body variable " + v.name() + " unassigned");
        }
      }
      const TermSet context = terms_of(s);
      TermSet images;
      Substitution full = restrict(label.match, rule->frontier);
      for (const auto& z : rule->existentials) {
        auto it = label.fresh.find(z);
        if (it == label.fresh.end()) {
          return reject(Rejection::FreshnessViolation, "no fresh name for " + z.name());
        }
        const Term& y = it->second;
        if (!y.is_variable() || context.count(y) || !images.insert(y).second) {
          return reject(Rejection::FreshnessViolation, y.name() + " is not fresh");
        }
        full.emplace(z, y);
      }
      for (const auto& a : rule->body) {
        if (!gamma.count(Formula::atom(apply_subst(label.match, a)))) {
          return reject(Rejection::ShapeMismatch, "body atom not in antecedent");
        }
      }
      Sequent p = s;
      for (const auto& a : rule->head) p.antecedent.insert(Formula::atom(apply_subst(full, a)));
      return accept({p});
    }
  }
  return reject(Rejection::ShapeMismatch, "unknown label");
}

InferenceCheck check_inference(const Sequent& conclusion, const RuleLabel& label,
                               const std::vector<Sequent>& premises, const RuleSet& rules,
                               const CheckOptions& options) {
  ExpectedPremises expected = expected_premises(conclusion, label, rules, options);
  if (!expected.status) return expected.status;
  InferenceCheck out;
  if (expected.premises.size() != premises.size()) {
    out.reason = Rejection::WrongPremiseCount;
    out.message = std::string(to_string(label.kind)) + " takes " +
                  std::to_string(expected.premises.size()) + " premise(s), got " +
                  std::to_string(premises.size());
    return out;
  }
  for (std::size_t i = 0; i < premises.size(); ++i) {
    if (!(premises[i] == expected.premises[i])) {
      out.reason = Rejection::ShapeMismatch;
      out.message = "premise " + std::to_string(i) + " differs from the rule instance";
      return out;
    }
  }
  return out;
}

ProofCheck check_proof(const ProofTree& proof, const RuleSet& rules, const CheckOptions& options) {
  struct Frame {
    const ProofTree* node;
    std::vector<std::size_t> path;
  };
  std::vector<Frame> stack{{&proof, {}}};
  std::vector<Sequent> premises;
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    premises.clear();
    for (const auto& p : f.node->premises) premises.push_back(p.conclusion);
    InferenceCheck c = check_inference(f.node->conclusion, f.node->label, premises, rules, options);
    if (!c) {
      ProofCheck out;
      out.ok = false;
      out.failure = c;
      out.path = std::move(f.path);
      return out;
    }
    for (std::size_t i = f.node->premises.size(); i-- > 0;) {
      auto path = f.path;
      path.push_back(i);
      stack.push_back({&f.node->premises[i], std::move(path)});
    }
  }
  return {};
}

bool is_r_derivation(const RDerivation& chain) {
  for (const auto& l : chain.labels) {
    if (l.kind != RuleKind::SeqRule) return false;
  }
  return true;
}

InferenceCheck check_chain(const RDerivation& chain, const RuleSet& rules) {
  InferenceCheck out;
  if (chain.sequents.size() != chain.labels.size() + 1) {
    out.reason = Rejection::WrongPremiseCount;
    out.message = "chain needs one more sequent than labels";
    return out;
  }
  for (std::size_t i = 0; i < chain.labels.size(); ++i) {
    out = check_inference(chain.sequents[i], chain.labels[i], {chain.sequents[i + 1]}, rules);
    if (!out) {
      out.message = "link " + std::to_string(i) + ": " + out.message;
      return out;
    }
  }
  return out;
}

ProofTree stitch(const RDerivation& chain, ProofTree top) {
  ProofTree current = std::move(top);
  for (std::size_t i = chain.labels.size(); i-- > 0;) {
    ProofTree node;
    node.conclusion = chain.sequents[i];
    node.label = chain.labels[i];
    node.premises.push_back(std::move(current));
    current = std::move(node);
  }
  return current;
}

std::vector<const RuleLabel*> labels_of(const ProofTree& proof) {
  std::vector<const RuleLabel*> out;
  std::vector<const ProofTree*> stack{&proof};
  while (!stack.empty()) {
    const ProofTree* t = stack.back();
    stack.pop_back();
    out.push_back(&t->label);
    for (std::size_t i = t->premises.size(); i-- > 0;) stack.push_back(&t->premises[i]);
  }
  return out;
}

}  // namespace chaseq
