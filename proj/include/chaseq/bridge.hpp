#pragma once

// Translations between chase derivations and sequent derivations, and proof
// normalization by permuting rule inferences downwards.

#include <utility>

#include "chaseq/calculus.hpp"
#include "chaseq/chase.hpp"

namespace chaseq {

/// One s(rho) inference per chase step, empty consequents. Throws
/// std::invalid_argument on an invalid derivation.
RDerivation chase_to_r_derivation(const ChaseDerivation& d, const RuleSet& rules);

/// Inverse translation. Throws std::invalid_argument unless the chain is a
/// valid rule-only derivation over atomic antecedents and empty consequents.
ChaseDerivation r_derivation_to_chase(const RDerivation& chain, const RuleSet& rules);

/// Replaces every consequent by `delta`. Throws std::invalid_argument if a
/// free variable of `delta` is one of the chain's fresh variables.
RDerivation weaken_consequent(const RDerivation& chain, const FormulaSet& delta);

/// Proof of I_final |- q built from the witness mu, stacked on the weakened
/// rule chain. Throws std::invalid_argument if mu(q) is not inside the final
/// instance.
ProofTree witness_to_proof(const ChaseDerivation& d, const Substitution& mu, const BCQ& query,
                           const RuleSet& rules);

/// True iff all rule inferences sit in one unary block at the root.
bool is_normal(const ProofTree& proof);

/// Permutes rule inferences below and-right/exists-right until the proof is
/// normal. Throws std::invalid_argument on proofs outside the fragment.
ProofTree normalize_proof(const ProofTree& proof, const RuleSet& rules);

/// Reads a derivation and a witness off a normal proof. Throws
/// std::invalid_argument on non-normal input.
std::pair<ChaseDerivation, Substitution> proof_to_witness(const ProofTree& proof,
                                                          const RuleSet& rules);

/// Multiset of rule ids used by rule inferences (sorted).
std::vector<std::string> rule_multiset(const ProofTree& proof);

/// Consistent renaming of variables throughout a proof.
ProofTree rename_proof(const ProofTree& proof, const Substitution& renaming);

}  // namespace chaseq
