#pragma once

// Saturation-driven bottom-up proof search for sequents D |- exists x. q(x).

#include <optional>
#include <vector>

#include "chaseq/calculus.hpp"
#include "chaseq/chase.hpp"

namespace chaseq {

enum class SearchStrategy {
  /// Fire rules (cyclically, while fuel lasts) before expanding the
  /// consequent. Default.
  RulesFirst,
  /// Listed step order: id, and-right, exists-right, then one rule step.
  ListedOrder,
};
const char* to_string(SearchStrategy s);

enum class Verdict { Proved, Refuted, Unknown };
const char* to_string(Verdict v);

struct SearchOptions {
  /// Number of antecedent-growth (rule) steps allowed.
  std::size_t fuel = kDefaultFuel;
  SearchStrategy strategy = SearchStrategy::RulesFirst;
  bool record_trace = false;
};

struct TraceEvent {
  enum class Kind { Seq, ExistsR, AndR, Id, Saturated, OutOfFuel } kind;
  std::size_t rule = 0;                // Seq
  std::vector<bool> active_before;     // Seq: rules with an active match before the step
  std::optional<Formula> formula;      // ExistsR/AndR principal, Id atom
  std::optional<Term> witness;         // ExistsR
  std::size_t branch_depth = 0;
};

struct SearchOutcome {
  Verdict verdict = Verdict::Unknown;
  std::optional<ProofTree> proof;  // Proved
  /// Refuted: the counter-model. Unknown: the antecedent reached.
  Instance model;
  /// Refuted: the saturated sequent. Unknown: the last open sequent.
  std::optional<Sequent> final_sequent;
  std::size_t steps_used = 0;  // rule steps, across all branches
  std::vector<TraceEvent> trace;
};

/// Definition-level saturation check on a sequent with atomic antecedent.
bool is_saturated(const Sequent& s, const RuleSet& rules);

/// Antecedent atoms of a saturated sequent; throws std::invalid_argument if
/// the sequent is not saturated.
Instance extract_counter_model(const Sequent& saturated, const RuleSet& rules);

/// Throws std::invalid_argument if the database is not ground.
SearchOutcome prove(const Database& database, const RuleSet& rules, const BCQ& query,
                    const SearchOptions& options = {});

/// Same on an explicit sequent; throws std::invalid_argument unless the
/// antecedent is ground atoms and the consequent a single BCQ.
SearchOutcome prove_sequent(const Sequent& goal, const RuleSet& rules,
                            const SearchOptions& options = {});

}  // namespace chaseq
