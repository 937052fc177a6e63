#include "doctest.h"
#include "chaseq/bridge.hpp"
#include "chaseq/corpus.hpp"
#include "chaseq/frontend.hpp"
#include "chaseq/search.hpp"
#include "fixtures.hpp"

using namespace chaseq;
using namespace fixture;

namespace {

const char* kExample = R"(# facts
M(b,a). M(c,b).
r1: M(x,y) -> A(x,y), F(x).
r2: A(x,y), A(y,z) -> A(x,z).
? A(x,a), F(x).
)";

std::size_t error_line(const std::string& text) {
  try {
    parse_problem(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("parse the basic example") {
  const Problem p = parse_problem(kExample);
  CHECK(p.database == example_database());
  REQUIRE(p.rules.size() == 2);
  CHECK(p.rules == example_rules());
  CHECK(p.rules[0].id == "r1");
  CHECK(p.rules[1].id == "r2");
  REQUIRE(p.query.has_value());
  CHECK(*p.query == example_query());
}

TEST_CASE("parse small inputs") {
  const Problem fact = parse_problem("p(a).");
  CHECK(fact.database == Instance{Atom("p", {C("a")})});
  CHECK(fact.rules.empty());
  CHECK_FALSE(fact.query.has_value());

  // Unlabelled rules are numbered by position; quoted names are constants.
  const Problem q = parse_problem("p(a).\np(x) -> q(x, 'k').\nq(x,y) -> s(y).\n? s('k').");
  REQUIRE(q.rules.size() == 2);
  CHECK(q.rules[0].id == "r1");
  CHECK(q.rules[1].id == "r2");
  CHECK(q.rules[0].head[0] == Atom("q", {V("x"), C("k")}));
  CHECK(q.query->atoms[0] == Atom("s", {C("k")}));
  CHECK(q.query->vars.empty());

  // Identifiers that occur in facts are constants in rules.
  const Problem c = parse_problem("p(a). p(a) -> q(a, z).");
  CHECK(c.rules[0].body[0] == Atom("p", {C("a")}));
  CHECK(c.rules[0].existentials == std::vector<Term>{V("z")});
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_problem("p(a). p(a,b)."), ParseError);
  CHECK(error_line("p(a).\n\np(a,b).") == 3);
  CHECK(error_line("p(_z1).") == 1);
  CHECK(error_line("p(a).\nTOP(a).") == 2);
  CHECK(error_line("p(a).\nq(x) -> _r(x).") == 2);
  CHECK(error_line("p(a) q(b).") == 1);
  CHECK(error_line("p(a).\n? p(x).\n? p(a).") == 3);
  CHECK(error_line("r: p(x) -> q(x).\nr: q(x) -> p(x).") == 2);
  CHECK(error_line("p('a).") == 1);
  CHECK(error_line("p(a) $") == 1);
  try {
    parse_problem("p(a).\n  q(a,b). q(a).");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() > 1);
  }
}

TEST_CASE("emit and parse round trip over the corpus") {
  std::size_t n = 0;
  for (auto profile : {Profile::TerminatingSmall, Profile::LinearRules, Profile::TransitiveClosure,
                       Profile::Nonterminating}) {
    for (const auto& p : generate_kbs(profile, 4, profile == Profile::Nonterminating ? 6 : 25)) {
      const Problem back = parse_problem(emit_problem(p));
      CHECK(back.database == p.database);
      CHECK(back.rules == p.rules);
      CHECK(back.query == p.query);
      ++n;
    }
  }
  CHECK(n > 100);
  CHECK(parse_problem(emit_problem(parse_problem(kExample))).rules == example_rules());
}

TEST_CASE("machine format round trips") {
  const Term fresh = Term::fresh();
  CHECK(parse_machine_term(to_machine(fresh)) == fresh);
  CHECK(parse_machine_term(to_machine(C("a"))) == C("a"));
  CHECK(parse_machine_term(to_machine(V("a"))) == V("a"));
  const Atom a("r", {C("a"), V("x"), fresh});
  CHECK(parse_machine_atom(to_machine(a)) == a);

  const Formula q = example_query().to_formula();
  const Formula nested = Formula::conjunction(Formula::negation(q), F(Atom("p", {fresh})));
  CHECK(parse_machine_formula(to_machine(q)) == q);
  CHECK(parse_machine_formula(to_machine(nested)) == nested);

  const Sequent s{as_formulas(example_database()), {q, nested}};
  CHECK(parse_machine_sequent(to_machine(s)) == s);
  CHECK(parse_machine_sequent(to_machine(Sequent{})) == Sequent{});

  const Substitution mu = {{V("x"), C("c")}, {V("y"), fresh}};
  CHECK(parse_machine_substitution(to_machine(mu)) == mu);
  CHECK(parse_machine_substitution(to_machine(Substitution{})).empty());

  const ChaseOutcome run = chase(example_database(), example_rules());
  CHECK(parse_machine_instance(to_machine(run.final_instance)) == run.final_instance);
  CHECK(parse_machine_instance("") == Instance{});

  CHECK(parse_machine_proof(to_machine(written_proof())) == written_proof());

  const ChaseDerivation d = parse_machine_derivation(to_machine(run.derivation, example_rules()),
                                                     example_rules());
  CHECK(d.size() == run.derivation.size());
  CHECK(d.final_instance() == run.final_instance);
  CHECK_THROWS_AS(parse_machine_derivation(to_machine(run.derivation, example_rules()), {}),
                  ParseError);
}

TEST_CASE("machine proofs and derivations with fresh variables") {
  const RuleSet succ = {
      ExistentialRule::make("s", {Atom("r", {V("x"), V("y")})}, {Atom("r", {V("y"), V("z")})})};
  const ChaseOutcome run = chase(Instance{Atom("r", {C("a"), C("b")})}, succ, 4);
  const ChaseDerivation d = parse_machine_derivation(to_machine(run.derivation, succ), succ);
  CHECK(d.final_instance() == run.final_instance);
  CHECK(d.validate(succ));

  const SearchOutcome r =
      prove(Instance{Atom("r", {C("a"), C("b")})}, succ,
            BCQ::make({V("x")}, {Atom("r", {C("b"), V("x")})}), SearchOptions{3});
  REQUIRE(r.proof.has_value());
  CHECK(parse_machine_proof(to_machine(*r.proof)) == *r.proof);
}

TEST_CASE("check verdicts survive serialization") {
  for (const auto& k : generate_families(Profile::TerminatingSmall, 8, 20)) {
    for (const auto& q : k.queries) {
      const SearchOutcome r = prove(k.database, k.rules, q);
      if (!r.proof) continue;
      ProofTree p = *r.proof;
      CHECK(check_proof(parse_machine_proof(to_machine(p)), k.rules));
      // A damaged copy is rejected identically before and after the trip.
      p.conclusion.antecedent.clear();
      const ProofCheck direct = check_proof(p, k.rules);
      const ProofCheck tripped = check_proof(parse_machine_proof(to_machine(p)), k.rules);
      CHECK(direct.ok == tripped.ok);
      CHECK(direct.path == tripped.path);
      CHECK(direct.failure.reason == tripped.failure.reason);
    }
  }
}

TEST_CASE("malformed machine input") {
  CHECK_THROWS_AS(parse_machine_proof(""), ParseError);
  CHECK_THROWS_AS(parse_machine_atom("p('a'"), ParseError);
  CHECK_THROWS_AS(parse_machine_formula("(p('a') & )"), ParseError);
  const std::string proof = to_machine(written_proof());
  CHECK_THROWS_AS(parse_machine_proof(proof + proof), ParseError);
}

TEST_CASE("text and DOT output") {
  const ChaseOutcome run = chase(example_database(), example_rules());
  const std::string dot = to_dot(run.final_instance);
  CHECK(dot.find("digraph") == 0);
  CHECK(dot.find("label=\"M\"") != std::string::npos);
  CHECK(dot.find("label=\"A\"") != std::string::npos);
  CHECK(dot.find("F") != std::string::npos);
  CHECK(dot.back() == '\n');

  const std::string text = to_text(written_proof());
  CHECK(text.find("s(r1)") != std::string::npos);
  CHECK(text.find("s(r2)") != std::string::npos);
  CHECK(to_text(example_rules()[0]).find("r1") != std::string::npos);
}
