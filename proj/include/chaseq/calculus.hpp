#pragma once

// Proof objects for G3 extended with one sequent rule per existential rule,
// and a checker that re-derives premises from (conclusion, label).

#include <optional>
#include <string>
#include <vector>

#include "chaseq/semantics.hpp"
#include "chaseq/syntax.hpp"

namespace chaseq {

enum class RuleKind { Id, NegL, NegR, AndL, AndR, ExistsL, ExistsR, SeqRule };
const char* to_string(RuleKind k);

struct RuleLabel {
  RuleKind kind = RuleKind::Id;
  /// Id: the shared atom. Logical rules: the principal formula.
  std::optional<Formula> principal;
  /// Whether the principal formula is repeated in the premises (set reading
  /// with implicit contraction). ExistsR always keeps it.
  bool keep_principal = true;
  std::optional<Term> witness;  // ExistsR
  std::optional<Term> eigen;    // ExistsL
  std::string rule_id;          // SeqRule
  Substitution match;           // SeqRule: body variables
  Substitution fresh;           // SeqRule: existential variables

  static RuleLabel id(const Atom& shared);
  static RuleLabel unary(RuleKind kind, Formula principal, bool keep = true);
  static RuleLabel and_right(Formula principal, bool keep = true);
  static RuleLabel exists_left(Formula principal, Term eigen, bool keep = true);
  static RuleLabel exists_right(Formula principal, Term witness);
  static RuleLabel seq_rule(std::string rule_id, Substitution match, Substitution fresh);

  bool operator==(const RuleLabel&) const = default;
};

struct ProofTree {
  Sequent conclusion;
  RuleLabel label;
  std::vector<ProofTree> premises;

  std::size_t node_count() const;
  bool operator==(const ProofTree&) const = default;
};

enum class Rejection {
  None,
  WrongPremiseCount,
  ShapeMismatch,
  FreshnessViolation,
  WitnessOutsideUniverse,
  UnknownRule,
};
const char* to_string(Rejection r);

struct CheckOptions {
  /// Accept any well-formed ExistsR witness, not only terms of the sequent.
  bool permissive_witness = false;
};

struct InferenceCheck {
  Rejection reason = Rejection::None;
  std::string message;
  explicit operator bool() const { return reason == Rejection::None; }
};

/// The premises mandated by (conclusion, label), or the rejection reason.
struct ExpectedPremises {
  InferenceCheck status;
  std::vector<Sequent> premises;
};
ExpectedPremises expected_premises(const Sequent& conclusion, const RuleLabel& label,
                                   const RuleSet& rules, const CheckOptions& options = {});

InferenceCheck check_inference(const Sequent& conclusion, const RuleLabel& label,
                               const std::vector<Sequent>& premises, const RuleSet& rules,
                               const CheckOptions& options = {});

struct ProofCheck {
  bool ok = true;
  InferenceCheck failure;
  /// Child indices from the root to the first failing node.
  std::vector<std::size_t> path;
  explicit operator bool() const { return ok; }
};

/// Checks every node; leaves must be Id. Preorder, so the reported node is
/// the first failure met walking down from the root.
ProofCheck check_proof(const ProofTree& proof, const RuleSet& rules,
                       const CheckOptions& options = {});

/// Linear derivation: sequents[0] is the root (bottom), sequents.back() the
/// open top; labels[i] justifies sequents[i] from sequents[i+1].
struct RDerivation {
  std::vector<Sequent> sequents;
  std::vector<RuleLabel> labels;

  const Sequent& root() const { return sequents.front(); }
  const Sequent& top() const { return sequents.back(); }
};

bool is_r_derivation(const RDerivation& chain);
/// Shape (sizes agree) plus check_inference at every link.
InferenceCheck check_chain(const RDerivation& chain, const RuleSet& rules);

/// Grafts `top` (a proof of chain.top()) onto the chain.
ProofTree stitch(const RDerivation& chain, ProofTree top);

/// Labels in preorder.
std::vector<const RuleLabel*> labels_of(const ProofTree& proof);

}  // namespace chaseq
