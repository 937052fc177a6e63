#include <random>

#include "doctest.h"
#include "chaseq/syntax.hpp"
#include "oracles.hpp"

using namespace chaseq;
using oracle::C;
using oracle::F;
using oracle::V;

namespace {

// Random formula over p/1, q/2 with variables x, y, z and constants a, b.
Formula random_formula(std::mt19937_64& rng, int depth) {
  const Term pool[] = {V("x"), V("y"), V("z"), C("a"), C("b")};
  auto term = [&] { return pool[rng() % 5]; };
  const unsigned pick = depth == 0 ? 0 : rng() % 4;
  switch (pick) {
    case 0:
      return rng() % 2 ? F(Atom("p", {term()})) : F(Atom("q", {term(), term()}));
    case 1:
      return Formula::negation(random_formula(rng, depth - 1));
    case 2:
      return Formula::conjunction(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    default:
      return Formula::exists(pool[rng() % 3], random_formula(rng, depth - 1));
  }
}

}  // namespace

TEST_CASE("free_vars") {
  CHECK(free_vars(F(Atom("p", {V("x"), C("a")}))) == TermSet{V("x")});
  const Formula f = Formula::exists(
      V("x"), Formula::conjunction(F(Atom("p", {V("x")})), F(Atom("q", {V("y")}))));
  CHECK(free_vars(f) == TermSet{V("y")});
  const Formula all = make_forall(V("x"), F(Atom("p", {V("x")})));
  CHECK(free_vars(all).empty());
  CHECK(free_vars(all) == oracle::free_variables(all));
}

TEST_CASE("free_vars agrees with the recursive oracle") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const Formula f = random_formula(rng, 4);
    CHECK(free_vars(f) == oracle::free_variables(f));
  }
}

TEST_CASE("substitute") {
  CHECK(substitute(F(Atom("p", {V("x"), V("y")})), C("c"), V("x")) ==
        F(Atom("p", {C("c"), V("y")})));
  const Formula bound = Formula::exists(V("x"), F(Atom("p", {V("x"), V("y")})));
  CHECK(substitute(bound, C("c"), V("x")) == bound);
  const Formula f = Formula::exists(
      V("z"), Formula::conjunction(F(Atom("A", {V("x"), C("a")})), F(Atom("F", {V("x")}))));
  const Formula expected = Formula::exists(
      V("z"), Formula::conjunction(F(Atom("A", {C("c"), C("a")})), F(Atom("F", {C("c")}))));
  CHECK(substitute(f, C("c"), V("x")) == expected);
  CHECK(oracle::substituted(f, C("c"), V("x")) == expected);
}

TEST_CASE("substitution property: free variables shrink") {
  std::mt19937_64 rng(12);
  const Term targets[] = {C("a"), V("w"), V("y")};
  for (int i = 0; i < 500; ++i) {
    const Formula f = random_formula(rng, 4);
    const Term t = targets[rng() % 3];
    const Formula g = substitute(f, t, V("x"));
    CHECK(g == oracle::substituted(f, t, V("x")));
    TermSet allowed = free_vars(f);
    allowed.erase(V("x"));
    if (t.is_variable()) allowed.insert(t);
    for (const auto& v : free_vars(g)) CHECK(allowed.count(v) == 1);
  }
}

TEST_CASE("rule_as_formula") {
  const auto r1 = ExistentialRule::make("r1", {Atom("M", {V("x"), V("y")})},
                                        {Atom("A", {V("x"), V("y")}), Atom("F", {V("x")})});
  CHECK(r1.frontier == std::vector<Term>{V("x"), V("y")});
  CHECK(r1.existentials.empty());
  const Formula matrix =
      make_implies(F(Atom("M", {V("x"), V("y")})),
                   Formula::conjunction(F(Atom("A", {V("x"), V("y")})), F(Atom("F", {V("x")}))));
  const Formula expected = Formula::negation(
      Formula::exists(V("x"), Formula::exists(V("y"), Formula::negation(matrix))));
  CHECK(rule_as_formula(r1) == expected);
  CHECK(free_vars(rule_as_formula(r1)).empty());

  const auto succ = ExistentialRule::make("s", {Atom("r", {V("x"), V("y")})},
                                          {Atom("r", {V("y"), V("z")})});
  CHECK(succ.existentials == std::vector<Term>{V("z")});
  CHECK(succ.frontier == std::vector<Term>{V("y")});
  // Prefix built independently: one universal block over {x, y}, one exists z.
  const Formula head = Formula::exists(V("z"), F(Atom("r", {V("y"), V("z")})));
  const Formula expected_succ = Formula::negation(Formula::exists(
      V("x"), Formula::exists(V("y"), Formula::negation(
                                          make_implies(F(Atom("r", {V("x"), V("y")})), head)))));
  CHECK(rule_as_formula(succ) == expected_succ);
}

TEST_CASE("rule validation") {
  CHECK_THROWS_AS(ExistentialRule::make("r", {}, {Atom("p", {V("x")})}), SyntaxError);
  CHECK_THROWS_AS(ExistentialRule::make("r", {Atom("p", {V("x")})}, {}), SyntaxError);
  CHECK_THROWS_AS(ExistentialRule::make("r", {Atom("TOP", {V("x")})}, {Atom("p", {V("x")})}),
                  SyntaxError);
}

TEST_CASE("fresh variables never collide with parsed ones") {
  const Term parsed = Term::variable("_z500");
  for (int i = 0; i < 10; ++i) {
    const Term f = Term::fresh();
    CHECK(f.is_fresh());
    CHECK(f.fresh_index() > 500);
    CHECK_FALSE(f == parsed);
  }
  CHECK_FALSE(Term::constant("x") == Term::variable("x"));
}

TEST_CASE("instances have set semantics") {
  Instance i;
  CHECK(i.insert(Atom("p", {C("a")})));
  CHECK_FALSE(i.insert(Atom("p", {C("a")})));
  CHECK(i.size() == 1);
  CHECK(i.is_ground());
  i.insert(Atom("q", {V("x"), C("a")}));
  CHECK_FALSE(i.is_ground());
  CHECK(i.terms() == TermSet{C("a"), V("x")});
}

TEST_CASE("signature enforces arity") {
  Signature s;
  s.observe(Atom("p", {C("a")}));
  CHECK_THROWS_AS(s.observe(Atom("p", {C("a"), C("b")})), SyntaxError);
}

TEST_CASE("BCQ round trip through formulas") {
  const BCQ q = BCQ::make({V("x")}, {Atom("A", {V("x"), C("a")}), Atom("F", {V("x")})});
  const auto back = as_bcq(q.to_formula());
  REQUIRE(back.has_value());
  CHECK(*back == q);
  CHECK_THROWS(BCQ::make({}, {Atom("p", {V("x")})}));
}
