#pragma once

// Deterministic knowledge-base generators and brute-force reference oracles.
// The oracles use only the syntax layer.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "chaseq/calculus.hpp"
#include "chaseq/frontend.hpp"

namespace chaseq {

enum class Profile { TerminatingSmall, LinearRules, TransitiveClosure, Nonterminating };
const char* to_string(Profile p);
std::optional<Profile> parse_profile(const std::string& name);

/// One database and rule set with several queries.
struct KbFamily {
  Database database;
  RuleSet rules;
  std::vector<BCQ> queries;

  Problem with_query(std::size_t i) const { return {database, rules, queries.at(i)}; }
};

inline constexpr std::size_t kDefaultCorpusSize = 60;

/// Deterministic per (profile, seed, count). TerminatingSmall starts with the
/// fixed hand-written list (the basic example first); Nonterminating starts with
/// r(x,y) -> r(y,z).
std::vector<KbFamily> generate_families(Profile profile, std::uint64_t seed,
                                        std::size_t count = kDefaultCorpusSize);
/// Flattened: one Problem per (family, query).
std::vector<Problem> generate_kbs(Profile profile, std::uint64_t seed,
                                  std::size_t count = kDefaultCorpusSize);

/// Weak acyclicity of the position dependency graph. Implies termination of
/// every restricted chase sequence.
bool weakly_acyclic(const RuleSet& rules);

enum class OracleVerdict { Yes, No, Unknown };
const char* to_string(OracleVerdict v);

/// Naive breadth-first restricted saturation for at most `bound` rounds,
/// then exhaustive query matching.
OracleVerdict oracle_entailment(const Database& database, const RuleSet& rules, const BCQ& query,
                                std::size_t bound);

/// The oracle's saturation alone; `complete` reports a fixpoint.
Instance oracle_saturate(const Database& database, const RuleSet& rules, std::size_t bound,
                         bool* complete = nullptr);

using Rng = std::mt19937_64;

/// Random instance of at most `max_atoms` atoms over the problem's signature
/// and constants plus two extra elements. Some samples are seeded with the
/// database and closed under a few oracle rounds.
Instance sample_instance(Rng& rng, const Problem& problem, std::size_t max_atoms = 8);

/// Moves rule inferences above exists-right/and-right inferences at random,
/// keeping the proof valid. Returns the input unchanged if no move applies.
ProofTree scramble_proof(const ProofTree& proof, const RuleSet& rules, Rng& rng,
                         std::size_t moves = 8);

}  // namespace chaseq
