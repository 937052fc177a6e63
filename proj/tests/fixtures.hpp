#pragma once

// Basic example objects shared by several test files.

#include "chaseq/calculus.hpp"
#include "oracles.hpp"

namespace fixture {

using namespace chaseq;
using oracle::C;
using oracle::F;
using oracle::V;

inline Database example_database() {
  return {Atom("M", {C("b"), C("a")}), Atom("M", {C("c"), C("b")})};
}

inline RuleSet example_rules() {
  return {ExistentialRule::make("r1", {Atom("M", {V("x"), V("y")})},
                                {Atom("A", {V("x"), V("y")}), Atom("F", {V("x")})}),
          ExistentialRule::make("r2", {Atom("A", {V("x"), V("y")}), Atom("A", {V("y"), V("z")})},
                                {Atom("A", {V("x"), V("z")})})};
}

inline BCQ example_query() {
  return BCQ::make({V("x")}, {Atom("A", {V("x"), C("a")}), Atom("F", {V("x")})});
}

inline FormulaSet atoms(std::initializer_list<Atom> list) {
  FormulaSet out;
  for (const auto& a : list) out.insert(F(a));
  return out;
}

// The basic example proof written out sequent by sequent: witness c, and-right
// dropping its principal formula.
inline ProofTree written_proof() {
  const Atom Mba("M", {C("b"), C("a")}), Mcb("M", {C("c"), C("b")}), Aba("A", {C("b"), C("a")}),
      Fb("F", {C("b")}), Acb("A", {C("c"), C("b")}), Fc("F", {C("c")}), Aca("A", {C("c"), C("a")});
  const FormulaSet g0 = atoms({Mba, Mcb});
  const FormulaSet g1 = atoms({Mba, Mcb, Aba, Fb});
  const FormulaSet g2 = atoms({Mba, Mcb, Aba, Fb, Acb, Fc});
  const FormulaSet g3 = atoms({Mba, Mcb, Aba, Fb, Acb, Fc, Aca});
  const Formula q = example_query().to_formula();
  const Formula inst = Formula::conjunction(F(Aca), F(Fc));

  ProofTree left{{g3, {q, F(Aca)}}, RuleLabel::id(Aca), {}};
  ProofTree right{{g3, {q, F(Fc)}}, RuleLabel::id(Fc), {}};
  ProofTree conj{{g3, {q, inst}}, RuleLabel::and_right(inst, false), {left, right}};
  ProofTree ex{{g3, {q}}, RuleLabel::exists_right(q, C("c")), {conj}};
  ProofTree s3{{g2, {q}},
               RuleLabel::seq_rule("r2", {{V("x"), C("c")}, {V("y"), C("b")}, {V("z"), C("a")}}, {}),
               {ex}};
  ProofTree s2{{g1, {q}}, RuleLabel::seq_rule("r1", {{V("x"), C("c")}, {V("y"), C("b")}}, {}), {s3}};
  return {{g0, {q}}, RuleLabel::seq_rule("r1", {{V("x"), C("b")}, {V("y"), C("a")}}, {}), {s2}};
}

}  // namespace fixture
