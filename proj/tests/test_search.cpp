#include <map>

#include "doctest.h"
#include "chaseq/bridge.hpp"
#include "chaseq/corpus.hpp"
#include "chaseq/search.hpp"
#include "oracles.hpp"

using namespace chaseq;
using oracle::C;
using oracle::F;
using oracle::V;

namespace {

const Database kD = {Atom("M", {C("b"), C("a")}), Atom("M", {C("c"), C("b")})};

RuleSet example_rules() {
  return {ExistentialRule::make("r1", {Atom("M", {V("x"), V("y")})},
                                {Atom("A", {V("x"), V("y")}), Atom("F", {V("x")})}),
          ExistentialRule::make("r2", {Atom("A", {V("x"), V("y")}), Atom("A", {V("y"), V("z")})},
                                {Atom("A", {V("x"), V("z")})})};
}

BCQ example_query() {
  return BCQ::make({V("x")}, {Atom("A", {V("x"), C("a")}), Atom("F", {V("x")})});
}

std::map<std::string, int> label_counts(const ProofTree& p) {
  std::map<std::string, int> out;
  for (const RuleLabel* l : labels_of(p)) {
    ++out[l->kind == RuleKind::SeqRule ? "s(" + l->rule_id + ")" : to_string(l->kind)];
  }
  return out;
}

}  // namespace

TEST_CASE("prove the basic example") {
  SearchOptions o;
  o.fuel = 1000;
  const SearchOutcome r = prove(kD, example_rules(), example_query(), o);
  REQUIRE(r.verdict == Verdict::Proved);
  REQUIRE(r.proof.has_value());
  CHECK(check_proof(*r.proof, example_rules()));
  CHECK(r.proof->conclusion == Sequent{as_formulas(kD), {example_query().to_formula()}});
  CHECK(rule_multiset(*r.proof) == std::vector<std::string>{"r1", "r1", "r2"});
  const std::map<std::string, int> expected = {
      {"s(r1)", 2}, {"s(r2)", 1}, {"existsr", 1}, {"andr", 1}, {"id", 2}};
  CHECK(label_counts(*r.proof) == expected);

  // Listed order expands the query first and closes each branch with r1 on b.
  o.strategy = SearchStrategy::ListedOrder;
  const SearchOutcome l = prove(kD, example_rules(), example_query(), o);
  REQUIRE(l.verdict == Verdict::Proved);
  CHECK(check_proof(*l.proof, example_rules()));
  CHECK(l.proof->label.kind == RuleKind::ExistsR);
  CHECK(*l.proof->label.witness == C("b"));
  CHECK(rule_multiset(*l.proof) == std::vector<std::string>{"r1", "r1"});
  CHECK(l.steps_used == 2);
}

TEST_CASE("prove trivial and fuel-bounded cases") {
  const Database pa = {Atom("p", {C("a")})};
  const SearchOutcome r = prove(pa, {}, BCQ::make({V("x")}, {Atom("p", {V("x")})}), {10});
  REQUIRE(r.verdict == Verdict::Proved);
  CHECK(r.proof->node_count() == 2);
  CHECK(r.proof->label.kind == RuleKind::ExistsR);
  CHECK(*r.proof->label.witness == C("a"));

  const RuleSet succ = {
      ExistentialRule::make("s", {Atom("r", {V("x"), V("y")})}, {Atom("r", {V("y"), V("z")})})};
  SearchOptions o;
  o.fuel = 50;
  const SearchOutcome u =
      prove(Instance{Atom("r", {C("a"), C("b")})}, succ, BCQ::make({V("x")}, {Atom("r", {V("x"), C("a")})}), o);
  CHECK(u.verdict == Verdict::Unknown);
  CHECK(u.steps_used == 50);
  CHECK(u.model.size() == 51);
}

TEST_CASE("is_saturated") {
  const Formula qa = F(Atom("q", {C("a")}));
  CHECK(is_saturated(Sequent{{F(Atom("p", {C("a")}))}, {qa}}, {}));
  CHECK_FALSE(is_saturated(Sequent{{F(Atom("M", {C("b"), C("a")}))}, {}}, {example_rules()[0]}));

  // Chase fixpoint with the query fully expanded: the id clause fails.
  const ChaseOutcome run = chase(kD, example_rules());
  Sequent s{as_formulas(run.final_instance), {example_query().to_formula()}};
  for (const auto& t : run.final_instance.terms()) {
    const Atom at("A", {t, C("a")}), ft("F", {t});
    s.consequent.insert(Formula::conjunction(F(at), F(ft)));
    s.consequent.insert(run.final_instance.contains(at) ? F(at) : F(ft));
  }
  CHECK_FALSE(is_saturated(s, example_rules()));
}

TEST_CASE("counter-models") {
  const Database pa = {Atom("p", {C("a")})};
  const RuleSet pq = {ExistentialRule::make("r", {Atom("p", {V("x")})}, {Atom("q", {V("x")})})};
  const SearchOutcome r = prove(pa, pq, BCQ::make({V("x")}, {Atom("r", {V("x")})}));
  REQUIRE(r.verdict == Verdict::Refuted);
  const Instance expected = {Atom("p", {C("a")}), Atom("q", {C("a")})};
  CHECK(r.model == expected);
  CHECK(hom_equivalent(r.model, chase(pa, pq).final_instance));
  REQUIRE(r.final_sequent.has_value());
  CHECK(is_saturated(*r.final_sequent, pq));
  CHECK(extract_counter_model(*r.final_sequent, pq) == expected);

  const SearchOutcome e = prove(pa, {}, BCQ::make({V("x")}, {Atom("q", {V("x")})}));
  REQUIRE(e.verdict == Verdict::Refuted);
  CHECK(e.model == pa);

  CHECK_THROWS_AS(extract_counter_model(Sequent{as_formulas(pa), {}}, pq), std::invalid_argument);
}

TEST_CASE("fragment violations are rejected") {
  const BCQ q = example_query();
  CHECK_THROWS_AS(prove(Instance{Atom("M", {V("x"), C("a")})}, example_rules(), q),
                  std::invalid_argument);
  Sequent two{as_formulas(kD), {q.to_formula(), F(Atom("F", {C("a")}))}};
  CHECK_THROWS_AS(prove_sequent(two, example_rules()), std::invalid_argument);
}

TEST_CASE("fairness of the cyclic rule order") {
  for (const auto& k : generate_families(Profile::Nonterminating, 2, 12)) {
    SearchOptions o;
    o.fuel = 60;
    o.record_trace = true;
    const SearchOutcome r = prove(k.database, k.rules, k.queries.back(), o);
    std::vector<const TraceEvent*> seq;
    for (const auto& e : r.trace) {
      if (e.kind == TraceEvent::Kind::Seq) seq.push_back(&e);
    }
    const std::size_t n = k.rules.size();
    for (std::size_t i = 0; i + n <= seq.size(); ++i) {
      for (std::size_t rho = 0; rho < n; ++rho) {
        if (!seq[i]->active_before[rho]) continue;
        bool served = false;
        for (std::size_t j = i; j < i + n && !served; ++j) {
          served = seq[j]->rule == rho || (j > i && !seq[j]->active_before[rho]);
        }
        CHECK(served);
      }
    }
  }
}

TEST_CASE("search outcomes are valid over the corpus") {
  for (auto profile : {Profile::TerminatingSmall, Profile::TransitiveClosure}) {
    for (const auto& k : generate_families(profile, 9, 40)) {
      for (const auto& q : k.queries) {
        const SearchOutcome r = prove(k.database, k.rules, q);
        SearchOptions listed;
        listed.strategy = SearchStrategy::ListedOrder;
        CHECK(prove(k.database, k.rules, q, listed).verdict == r.verdict);
        if (r.proof) {
          CHECK(check_proof(*r.proof, k.rules));
          // Along every branch both sides only grow.
          std::vector<const ProofTree*> stack{&*r.proof};
          while (!stack.empty()) {
            const ProofTree* n = stack.back();
            stack.pop_back();
            for (const auto& p : n->premises) {
              for (const auto& f : n->conclusion.antecedent) CHECK(p.conclusion.antecedent.count(f));
              for (const auto& f : n->conclusion.consequent) CHECK(p.conclusion.consequent.count(f));
              stack.push_back(&p);
            }
          }
        } else {
          REQUIRE(r.verdict == Verdict::Refuted);
          CHECK(models_kb(r.model, k.database, k.rules));
          CHECK_FALSE(satisfies(r.model, {}, q.to_formula()));
        }
      }
    }
  }
}
