#pragma once

// Restricted chase: triggers, single applications, the one-step chase and the
// fair fixpoint loop that records a replayable derivation.

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "chaseq/semantics.hpp"
#include "chaseq/syntax.hpp"

namespace chaseq {

inline constexpr std::size_t kDefaultFuel = 10000;

/// A rule (by index into the rule set) with an assignment embedding its body.
struct Trigger {
  std::size_t rule = 0;
  Substitution match;  // over the rule's body variables

  auto operator<=>(const Trigger&) const = default;
  bool operator==(const Trigger&) const = default;
};

/// (rule index, images of the body variables in sorted variable order).
using TriggerKey = std::pair<std::size_t, std::vector<Term>>;
TriggerKey trigger_key(const Trigger& t, const RuleSet& rules);

/// Every trigger over I, sorted by rule index then body-variable images.
std::vector<Trigger> find_triggers(const Instance& instance, const RuleSet& rules);

/// Triggers of I whose body image uses at least one atom of `delta`, sorted
/// like find_triggers.
std::vector<Trigger> triggers_touching(const Instance& instance, const std::vector<Atom>& delta,
                                       const RuleSet& rules);

bool is_trigger(const Trigger& t, const Instance& instance, const RuleSet& rules);
/// True iff no extension to the existential variables maps the head into I.
bool is_active(const Trigger& t, const Instance& instance, const RuleSet& rules);

/// Result of one application: the fresh names used and the atoms it added.
struct Application {
  Substitution fresh;  // existential variable -> fresh variable
  std::vector<Atom> head_atoms;
};

/// Head instance of t under `fresh` (throws if `fresh` misses an existential).
std::vector<Atom> instantiate_head(const Trigger& t, const Substitution& fresh,
                                   const RuleSet& rules);
/// Mints fresh variables for the rule's existentials.
Substitution mint_fresh(const ExistentialRule& rule);

/// tau(I) with newly minted variables; throws std::invalid_argument if t is
/// not a trigger in I.
Instance apply_trigger(const Trigger& t, const Instance& instance, const RuleSet& rules);
/// In-place variant reporting what was minted and added.
Application apply_trigger_in_place(const Trigger& t, Instance& instance, const RuleSet& rules);

/// Union of tau(I) over all triggers in I (active or not).
Instance one_step_chase(const Instance& instance, const RuleSet& rules);

struct ChaseStep {
  Trigger trigger;
  Substitution fresh;
  /// Head atoms not already present before the step.
  std::vector<Atom> added;
};

/// Initial instance plus a sequence of trigger applications. Intermediate
/// instances are replayed on demand.
class ChaseDerivation {
 public:
  ChaseDerivation() = default;
  explicit ChaseDerivation(Instance initial) : initial_(std::move(initial)), final_(initial_) {}

  /// Appends a step applying `trigger` with the given fresh names; throws
  /// std::invalid_argument if it is not a trigger in the current final
  /// instance or the names are not fresh.
  void push(const Trigger& trigger, const Substitution& fresh, const RuleSet& rules);
  /// Records a step computed elsewhere (trusted; use validate()).
  void push_unchecked(ChaseStep step, const std::vector<Atom>& head_atoms);

  const Instance& initial() const { return initial_; }
  const Instance& final_instance() const { return final_; }
  const std::vector<ChaseStep>& steps() const { return steps_; }
  std::size_t size() const { return steps_.size(); }

  /// I_1 .. I_{n+1}.
  std::vector<Instance> instances() const;
  Instance instance_at(std::size_t index) const;

  /// Replays every step: triggers embed, names are fresh, instances grow.
  bool validate(const RuleSet& rules, std::string* why = nullptr) const;

 private:
  Instance initial_;
  Instance final_;
  std::vector<ChaseStep> steps_;
};

struct ChaseOutcome {
  Instance final_instance;
  bool terminated = false;
  std::size_t steps_used = 0;
  ChaseDerivation derivation;
};

/// Called after each application; return true to stop early.
using ChaseObserver = std::function<bool(const Instance&, const ChaseStep&)>;

/// Restricted chase: FIFO over discovered active triggers, re-checked when
/// popped, each trigger identity fired at most once. Fuel counts applications.
ChaseOutcome chase(const Database& database, const RuleSet& rules, std::size_t fuel = kDefaultFuel,
                   const ChaseObserver& observer = {});

enum class Entailment { Yes, No, Unknown };
const char* to_string(Entailment e);

struct ChaseAnswer {
  Entailment verdict = Entailment::Unknown;
  std::optional<Substitution> witness;  // over the query variables
  ChaseOutcome run;                     // stops at the first witnessing prefix
};

ChaseAnswer bcq_entailed_by_chase(const Database& database, const RuleSet& rules, const BCQ& query,
                                  std::size_t fuel = kDefaultFuel);

}  // namespace chaseq
