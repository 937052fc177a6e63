#include "doctest.h"
#include "chaseq/bridge.hpp"
#include "chaseq/corpus.hpp"
#include "fixtures.hpp"

using namespace chaseq;
using namespace fixture;

TEST_CASE("fixed families come first") {
  const auto small = generate_families(Profile::TerminatingSmall, 1, 10);
  REQUIRE(small.size() == 10);
  CHECK(small[0].database == example_database());
  CHECK(small[0].rules == example_rules());
  CHECK(small[0].queries[0] == example_query());

  const auto inf = generate_families(Profile::Nonterminating, 1, 4);
  REQUIRE(!inf.empty());
  CHECK(inf[0].rules.size() == 1);
  CHECK(inf[0].rules[0].body == std::vector<Atom>{Atom("r", {V("x"), V("y")})});
  CHECK(inf[0].rules[0].head == std::vector<Atom>{Atom("r", {V("y"), V("z")})});
}

TEST_CASE("generation is deterministic per seed") {
  for (auto profile : {Profile::TerminatingSmall, Profile::LinearRules, Profile::TransitiveClosure,
                       Profile::Nonterminating}) {
    const std::size_t n = profile == Profile::Nonterminating ? 6 : 20;
    const auto a = generate_kbs(profile, 12, n);
    const auto b = generate_kbs(profile, 12, n);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].database == b[i].database);
      CHECK(a[i].rules == b[i].rules);
      CHECK(a[i].query == b[i].query);
    }
    CHECK(generate_families(profile, 12, n).size() == n);
  }
  const auto x = generate_kbs(Profile::LinearRules, 1, 20);
  const auto y = generate_kbs(Profile::LinearRules, 2, 20);
  bool differ = x.size() != y.size();
  for (std::size_t i = 0; !differ && i < x.size(); ++i) differ = !(x[i].rules == y[i].rules);
  CHECK(differ);
}

TEST_CASE("profile names") {
  for (auto profile : {Profile::TerminatingSmall, Profile::LinearRules, Profile::TransitiveClosure,
                       Profile::Nonterminating}) {
    CHECK(parse_profile(to_string(profile)) == profile);
  }
  CHECK_FALSE(parse_profile("nope").has_value());
}

TEST_CASE("weak acyclicity") {
  CHECK(weakly_acyclic(example_rules()));
  CHECK(weakly_acyclic({}));
  const RuleSet succ = {
      ExistentialRule::make("s", {Atom("r", {V("x"), V("y")})}, {Atom("r", {V("y"), V("z")})})};
  CHECK_FALSE(weakly_acyclic(succ));
  // Existential position reached, but it never feeds back.
  const RuleSet chain = {
      ExistentialRule::make("a", {Atom("p", {V("x")})}, {Atom("q", {V("x"), V("z")})}),
      ExistentialRule::make("b", {Atom("q", {V("x"), V("y")})}, {Atom("s", {V("y")})})};
  CHECK(weakly_acyclic(chain));
  const RuleSet loop = {
      ExistentialRule::make("a", {Atom("p", {V("x")})}, {Atom("q", {V("x"), V("z")})}),
      ExistentialRule::make("b", {Atom("q", {V("x"), V("y")})}, {Atom("p", {V("y")})})};
  CHECK_FALSE(weakly_acyclic(loop));
}

TEST_CASE("terminating profiles terminate and nonterminating ones do not") {
  for (auto profile : {Profile::TerminatingSmall, Profile::LinearRules, Profile::TransitiveClosure}) {
    for (const auto& k : generate_families(profile, 3, 30)) {
      CHECK(weakly_acyclic(k.rules));
      CHECK(chase(k.database, k.rules).terminated);
    }
  }
  for (const auto& k : generate_families(Profile::Nonterminating, 3, 6)) {
    CHECK_FALSE(weakly_acyclic(k.rules));
    CHECK_FALSE(chase(k.database, k.rules, 100).terminated);
  }
}

TEST_CASE("oracle verdicts") {
  CHECK(oracle_entailment(example_database(), example_rules(), example_query(), 10) ==
        OracleVerdict::Yes);
  CHECK(oracle_entailment(example_database(), example_rules(),
                          BCQ::make({}, {Atom("F", {C("a")})}), 10) == OracleVerdict::No);
  const RuleSet succ = {
      ExistentialRule::make("s", {Atom("r", {V("x"), V("y")})}, {Atom("r", {V("y"), V("z")})})};
  const Database rab = {Atom("r", {C("a"), C("b")})};
  CHECK(oracle_entailment(rab, succ, BCQ::make({V("x"), V("y")}, {Atom("r", {V("x"), V("y")}),
                                                                  Atom("r", {V("y"), V("x")})}),
                          5) == OracleVerdict::Unknown);
  CHECK(oracle_entailment(rab, succ, BCQ::make({V("x")}, {Atom("r", {C("b"), V("x")})}), 5) ==
        OracleVerdict::Yes);

  bool complete = false;
  const Instance sat = oracle_saturate(example_database(), example_rules(), 10, &complete);
  CHECK(complete);
  CHECK(sat == chase(example_database(), example_rules()).final_instance);
  oracle_saturate(rab, succ, 5, &complete);
  CHECK_FALSE(complete);
}

TEST_CASE("sampled instances stay in the signature") {
  Rng rng(61);
  const Problem p{example_database(), example_rules(), example_query()};
  std::size_t containing = 0;
  for (int i = 0; i < 300; ++i) {
    const Instance j = sample_instance(rng, p, 8);
    for (const auto& a : j) {
      CHECK((a.predicate == "M" || a.predicate == "A" || a.predicate == "F"));
    }
    containing += j.includes(example_database());
  }
  CHECK(containing > 0);
}

TEST_CASE("scrambled proofs stay valid") {
  Rng rng(62);
  std::size_t moved = 0;
  for (const auto& k : generate_families(Profile::TerminatingSmall, 2, 30)) {
    for (const auto& q : k.queries) {
      const ChaseAnswer ans = bcq_entailed_by_chase(k.database, k.rules, q);
      if (ans.verdict != Entailment::Yes) continue;
      const ProofTree p = witness_to_proof(ans.run.derivation, *ans.witness, q, k.rules);
      const ProofTree s = scramble_proof(p, k.rules, rng);
      CHECK(check_proof(s, k.rules));
      CHECK(s.conclusion == p.conclusion);
      moved += !(s == p);
    }
  }
  CHECK(moved > 0);
}
