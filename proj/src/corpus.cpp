#include "chaseq/corpus.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "chaseq/chase.hpp"

namespace chaseq {

namespace {

std::uint64_t below(Rng& rng, std::uint64_t n) { return n == 0 ? 0 : rng() % n; }

bool chance(Rng& rng, unsigned percent) { return below(rng, 100) < percent; }

Term c(const char* name) { return Term::constant(name); }
Term v(const std::string& name) { return Term::variable(name); }

BCQ query_of(std::vector<Atom> atoms) {
  std::vector<Term> vars;
  for (const auto& a : atoms) {
    for (const auto& t : a.args) {
      if (t.is_variable() && std::find(vars.begin(), vars.end(), t) == vars.end()) vars.push_back(t);
    }
  }
  return BCQ::make(std::move(vars), std::move(atoms));
}

std::vector<KbFamily> fixed_terminating() {
  std::vector<KbFamily> out;
  {
    KbFamily k;
    k.database = {Atom("M", {c("b"), c("a")}), Atom("M", {c("c"), c("b")})};
    k.rules = {
        ExistentialRule::make("r1", {Atom("M", {v("x"), v("y")})},
                              {Atom("A", {v("x"), v("y")}), Atom("F", {v("x")})}),
        ExistentialRule::make("r2", {Atom("A", {v("x"), v("y")}), Atom("A", {v("y"), v("z")})},
                              {Atom("A", {v("x"), v("z")})}),
    };
    k.queries = {
        query_of({Atom("A", {v("x"), c("a")}), Atom("F", {v("x")})}),
        query_of({Atom("A", {c("c"), c("a")})}),
        query_of({Atom("F", {c("a")})}),
        query_of({Atom("A", {v("x"), v("y")}), Atom("A", {v("y"), v("x")})}),
    };
    out.push_back(std::move(k));
  }
  {
    KbFamily k;
    k.database = {Atom("Person", {c("alice")}), Atom("knows", {c("alice"), c("bob")})};
    k.rules = {
        ExistentialRule::make("r1", {Atom("Person", {v("x")})}, {Atom("parent", {v("x"), v("y")})}),
        ExistentialRule::make("r2", {Atom("parent", {v("x"), v("y")})},
                              {Atom("ancestor", {v("x"), v("y")})}),
        ExistentialRule::make("r3", {Atom("knows", {v("x"), v("y")})}, {Atom("Person", {v("y")})}),
    };
    k.queries = {
        query_of({Atom("parent", {c("bob"), v("y")})}),
        query_of({Atom("parent", {v("y"), c("alice")})}),
        query_of({Atom("ancestor", {v("x"), v("y")}), Atom("Person", {v("x")})}),
        query_of({Atom("parent", {v("x"), v("y")}), Atom("Person", {v("y")})}),
    };
    out.push_back(std::move(k));
  }
  {
    KbFamily k;
    k.database = {Atom("p", {c("a")})};
    k.queries = {
        query_of({Atom("p", {c("a")})}),
        query_of({Atom("q", {c("a")})}),
        query_of({Atom("p", {v("x")})}),
    };
    out.push_back(std::move(k));
  }
  {
    // The restricted chase never fires here: r(a,b) already satisfies the head.
    KbFamily k;
    k.database = {Atom("r", {c("a"), c("b")})};
    k.rules = {ExistentialRule::make("r1", {Atom("r", {v("x"), v("y")})},
                                     {Atom("r", {v("x"), v("z")})})};
    k.queries = {
        query_of({Atom("r", {c("a"), v("z")})}),
        query_of({Atom("r", {c("b"), v("z")})}),
        query_of({Atom("r", {v("x"), v("x")})}),
    };
    out.push_back(std::move(k));
  }
  return out;
}

std::vector<KbFamily> fixed_nonterminating() {
  std::vector<KbFamily> out;
  {
    KbFamily k;
    k.database = {Atom("r", {c("a"), c("b")})};
    k.rules = {ExistentialRule::make("r1", {Atom("r", {v("x"), v("y")})},
                                     {Atom("r", {v("y"), v("z")})})};
    k.queries = {
        query_of({Atom("r", {v("x"), v("x")})}),
        query_of({Atom("r", {c("b"), v("z")})}),
        query_of({Atom("r", {c("b"), c("a")})}),
    };
    out.push_back(std::move(k));
  }
  {
    KbFamily k;
    k.database = {Atom("P", {c("a")})};
    k.rules = {ExistentialRule::make("r1", {Atom("P", {v("x")})},
                                     {Atom("parent", {v("x"), v("y")}), Atom("P", {v("y")})})};
    k.queries = {
        query_of({Atom("parent", {v("x"), v("y")}), Atom("parent", {v("y"), v("z")})}),
        query_of({Atom("parent", {v("x"), c("a")})}),
        query_of({Atom("parent", {v("x"), v("x")})}),
    };
    out.push_back(std::move(k));
  }
  return out;
}

struct Shape {
  std::vector<std::pair<std::string, std::size_t>> predicates;
  std::vector<Term> constants;
};

Shape random_shape(Rng& rng) {
  Shape s;
  const std::size_t npred = 2 + below(rng, 5);
  for (std::size_t i = 0; i < npred; ++i) {
    s.predicates.emplace_back("p" + std::to_string(i), 1 + below(rng, 3));
  }
  const char* names[] = {"a", "b", "c", "d"};
  const std::size_t ncons = 2 + below(rng, 3);
  for (std::size_t i = 0; i < ncons; ++i) s.constants.push_back(c(names[i]));
  return s;
}

Atom random_atom(Rng& rng, const Shape& s, const std::vector<Term>& pool) {
  const auto& [pred, arity] = s.predicates[below(rng, s.predicates.size())];
  std::vector<Term> args;
  for (std::size_t i = 0; i < arity; ++i) args.push_back(pool[below(rng, pool.size())]);
  return Atom(pred, std::move(args));
}

Database random_database(Rng& rng, const Shape& s) {
  Database d;
  const std::size_t n = 1 + below(rng, 10);
  // Small signatures may have fewer than n distinct ground atoms.
  for (std::size_t tries = 0; d.size() < n && tries < 10 * n; ++tries) {
    d.insert(random_atom(rng, s, s.constants));
  }
  return d;
}

ExistentialRule random_rule(Rng& rng, const Shape& s, std::size_t index, std::size_t max_body,
                            unsigned existential_percent) {
  const std::vector<Term> body_pool = {v("x"), v("y"), v("z")};
  std::vector<Atom> body;
  const std::size_t nbody = 1 + below(rng, max_body);
  for (std::size_t i = 0; i < nbody; ++i) body.push_back(random_atom(rng, s, body_pool));
  std::vector<Term> head_pool;
  for (const auto& a : body) {
    for (const auto& t : a.args) {
      if (std::find(head_pool.begin(), head_pool.end(), t) == head_pool.end()) head_pool.push_back(t);
    }
  }
  const std::vector<Term> existentials = {v("u"), v("w")};
  std::vector<Atom> head;
  const std::size_t nhead = 1 + below(rng, 2);
  for (std::size_t i = 0; i < nhead; ++i) {
    const auto& [pred, arity] = s.predicates[below(rng, s.predicates.size())];
    std::vector<Term> args;
    for (std::size_t j = 0; j < arity; ++j) {
      args.push_back(chance(rng, existential_percent) ? existentials[below(rng, 2)]
                                                      : head_pool[below(rng, head_pool.size())]);
    }
    head.emplace_back(pred, std::move(args));
  }
  return ExistentialRule::make("r" + std::to_string(index + 1), std::move(body), std::move(head));
}

std::vector<BCQ> random_queries(Rng& rng, const Shape& s, const Database& d, const RuleSet& rules) {
  std::vector<Term> consts;
  for (const auto& t : d.terms()) consts.push_back(t);
  const std::vector<Term> qvars = {v("x0"), v("x1"), v("x2")};
  std::vector<BCQ> out;

  // A fact with some constants lifted to variables: always entailed.
  {
    const auto facts = d.atoms();
    Atom a = facts[below(rng, facts.size())];
    std::map<Term, Term> lift;
    for (auto& t : a.args) {
      if (lift.count(t) == 0 && chance(rng, 50)) lift.emplace(t, qvars[lift.size() % 3]);
      if (lift.count(t) != 0) t = lift.at(t);
    }
    out.push_back(query_of({a}));
  }
  // A rule head with every variable generalised.
  if (!rules.empty()) {
    const auto& r = rules[below(rng, rules.size())];
    std::map<Term, Term> rename;
    std::vector<Atom> atoms;
    for (auto a : r.head) {
      for (auto& t : a.args) {
        if (t.is_variable()) {
          if (rename.count(t) == 0) rename.emplace(t, v("y" + std::to_string(rename.size())));
          t = rename.at(t);
        }
      }
      atoms.push_back(std::move(a));
    }
    out.push_back(query_of(std::move(atoms)));
  }
  // Random patterns mixing variables and constants.
  std::vector<Term> pool = qvars;
  pool.insert(pool.end(), consts.begin(), consts.end());
  while (out.size() < 4) {
    std::vector<Atom> atoms;
    const std::size_t n = 1 + below(rng, 3);
    for (std::size_t i = 0; i < n; ++i) atoms.push_back(random_atom(rng, s, pool));
    out.push_back(query_of(std::move(atoms)));
  }
  return out;
}

constexpr std::size_t kDivergenceProbe = 100;

KbFamily random_family(Rng& rng, Profile profile) {
  for (;;) {
    KbFamily k;
    const Shape s = random_shape(rng);
    k.database = random_database(rng, s);
    const std::size_t nrules = 1 + below(rng, 5);
    const std::size_t max_body = profile == Profile::LinearRules ? 1 : 2;
    const unsigned ex = profile == Profile::Nonterminating ? 35 : 20;
    for (std::size_t i = 0; i < nrules; ++i) k.rules.push_back(random_rule(rng, s, i, max_body, ex));
    const bool wa = weakly_acyclic(k.rules);
    if (wa == (profile == Profile::Nonterminating)) continue;
    // Not weakly acyclic is not enough: keep only runs still going after a while.
    if (!wa && chase(k.database, k.rules, kDivergenceProbe).terminated) continue;
    k.queries = random_queries(rng, s, k.database, k.rules);
    return k;
  }
}

KbFamily transitive_family(Rng& rng) {
  KbFamily k;
  const char* names[] = {"a", "b", "c", "d", "e"};
  const std::size_t n = 3 + below(rng, 3);
  std::vector<Term> nodes;
  for (std::size_t i = 0; i < n; ++i) nodes.push_back(c(names[i]));
  const std::size_t nedges = 2 + below(rng, 6);
  for (std::size_t tries = 0; k.database.size() < nedges && tries < 10 * nedges; ++tries) {
    k.database.insert(Atom("e", {nodes[below(rng, n)], nodes[below(rng, n)]}));
  }
  k.rules.push_back(ExistentialRule::make("r1", {Atom("e", {v("x"), v("y")})},
                                          {Atom("t", {v("x"), v("y")})}));
  if (chance(rng, 50)) {
    k.rules.push_back(ExistentialRule::make(
        "r2", {Atom("t", {v("x"), v("y")}), Atom("e", {v("y"), v("z")})}, {Atom("t", {v("x"), v("z")})}));
  } else {
    k.rules.push_back(ExistentialRule::make(
        "r2", {Atom("t", {v("x"), v("y")}), Atom("t", {v("y"), v("z")})}, {Atom("t", {v("x"), v("z")})}));
  }
  if (chance(rng, 60)) {
    k.rules.push_back(ExistentialRule::make("r3", {Atom("t", {v("x"), v("x")})},
                                            {Atom("cyc", {v("x")})}));
    k.rules.push_back(ExistentialRule::make("r4", {Atom("cyc", {v("x")})},
                                            {Atom("mark", {v("x"), v("w")})}));
  }
  // Only constants that occur in facts may appear in queries.
  std::vector<Term> used;
  for (const auto& t : k.database.terms()) used.push_back(t);
  auto pick = [&] { return used[below(rng, used.size())]; };
  k.queries = {
      query_of({Atom("t", {pick(), pick()})}),
      query_of({Atom("t", {v("x"), v("x")})}),
      query_of({Atom("t", {v("x"), v("y")}), Atom("t", {v("y"), v("x")})}),
      query_of({Atom("t", {pick(), v("x")}), Atom("e", {v("x"), pick()})}),
  };
  if (k.rules.size() > 2) k.queries.push_back(query_of({Atom("mark", {v("x"), v("y")})}));
  return k;
}

}  // namespace

const char* to_string(Profile p) {
  switch (p) {
    case Profile::TerminatingSmall:
      return "terminating-small";
    case Profile::LinearRules:
      return "linear-rules";
    case Profile::TransitiveClosure:
      return "transitive-closure";
    case Profile::Nonterminating:
      return "nonterminating";
  }
  return "?";
}

std::optional<Profile> parse_profile(const std::string& name) {
  for (Profile p : {Profile::TerminatingSmall, Profile::LinearRules, Profile::TransitiveClosure,
                    Profile::Nonterminating}) {
    if (name == to_string(p)) return p;
  }
  return std::nullopt;
}

std::vector<KbFamily> generate_families(Profile profile, std::uint64_t seed, std::size_t count) {
  Rng rng(seed * 4 + static_cast<std::uint64_t>(profile));
  std::vector<KbFamily> out;
  if (profile == Profile::TerminatingSmall) out = fixed_terminating();
  if (profile == Profile::Nonterminating) out = fixed_nonterminating();
  while (out.size() < count) {
    out.push_back(profile == Profile::TransitiveClosure ? transitive_family(rng)
                                                        : random_family(rng, profile));
  }
  return out;
}

std::vector<Problem> generate_kbs(Profile profile, std::uint64_t seed, std::size_t count) {
  std::vector<Problem> out;
  for (const auto& k : generate_families(profile, seed, count)) {
    for (std::size_t i = 0; i < k.queries.size(); ++i) out.push_back(k.with_query(i));
  }
  return out;
}

bool weakly_acyclic(const RuleSet& rules) {
  using Position = std::pair<std::string, std::size_t>;
  // edge -> special?
  std::map<Position, std::map<Position, bool>> graph;
  for (const auto& r : rules) {
    for (const auto& b : r.body) {
      for (std::size_t i = 0; i < b.args.size(); ++i) {
        const Term& x = b.args[i];
        if (!x.is_variable()) continue;
        bool in_head = false;
        for (const auto& h : r.head) {
          for (const auto& t : h.args) in_head |= t == x;
        }
        if (!in_head) continue;
        const Position from{b.predicate, i};
        for (const auto& h : r.head) {
          for (std::size_t j = 0; j < h.args.size(); ++j) {
            const Term& t = h.args[j];
            const bool existential =
                std::find(r.existentials.begin(), r.existentials.end(), t) != r.existentials.end();
            if (t == x || existential) {
              bool& special = graph[from][{h.predicate, j}];
              special = special || existential;
            }
          }
        }
      }
    }
  }
  // A special edge u -> w lies on a cycle iff u is reachable from w.
  auto reaches = [&](const Position& start, const Position& goal) {
    std::set<Position> seen{start};
    std::vector<Position> stack{start};
    while (!stack.empty()) {
      const Position p = stack.back();
      stack.pop_back();
      if (p == goal) return true;
      auto it = graph.find(p);
      if (it == graph.end()) continue;
      for (const auto& [q, special] : it->second) {
        if (seen.insert(q).second) stack.push_back(q);
      }
    }
    return false;
  };
  for (const auto& [from, edges] : graph) {
    for (const auto& [to, special] : edges) {
      if (special && reaches(to, from)) return false;
    }
  }
  return true;
}

const char* to_string(OracleVerdict v) {
  switch (v) {
    case OracleVerdict::Yes:
      return "yes";
    case OracleVerdict::No:
      return "no";
    case OracleVerdict::Unknown:
      return "unknown";
  }
  return "?";
}

namespace {

using Binding = std::map<Term, Term>;
using Facts = std::set<Atom>;

// Nested-loop join over the whole fact set; `visit` returns true to stop.
bool join(const std::vector<Atom>& pattern, std::size_t i, const Facts& facts, Binding& b,
          const std::function<bool(const Binding&)>& visit) {
  if (i == pattern.size()) return visit(b);
  const Atom& p = pattern[i];
  for (const Atom& f : facts) {
    if (f.predicate != p.predicate || f.args.size() != p.args.size()) continue;
    std::vector<Term> bound_here;
    bool ok = true;
    for (std::size_t k = 0; k < p.args.size() && ok; ++k) {
      const Term& t = p.args[k];
      if (t.is_constant()) {
        ok = t == f.args[k];
      } else if (auto it = b.find(t); it != b.end()) {
        ok = it->second == f.args[k];
      } else {
        b.emplace(t, f.args[k]);
        bound_here.push_back(t);
      }
    }
    if (ok && join(pattern, i + 1, facts, b, visit)) return true;
    for (const auto& t : bound_here) b.erase(t);
  }
  return false;
}

}  // namespace

Instance oracle_saturate(const Database& database, const RuleSet& rules, std::size_t bound,
                         bool* complete) {
  Facts facts(database.begin(), database.end());
  bool done = false;
  for (std::size_t round = 0; round < bound && !done; ++round) {
    std::vector<std::pair<const ExistentialRule*, Binding>> found;
    for (const auto& r : rules) {
      Binding b;
      join(r.body, 0, facts, b, [&](const Binding& m) {
        found.emplace_back(&r, m);
        return false;
      });
    }
    bool changed = false;
    for (auto& [r, m] : found) {
      Binding probe = m;
      const bool satisfied = join(r->head, 0, facts, probe, [](const Binding&) { return true; });
      if (satisfied) continue;
      Binding ext = m;
      for (const auto& z : r->existentials) ext.emplace(z, Term::fresh());
      for (const auto& h : r->head) {
        Atom a = h;
        for (auto& t : a.args) {
          if (t.is_variable()) t = ext.at(t);
        }
        facts.insert(std::move(a));
      }
      changed = true;
    }
    done = !changed;
  }
  if (complete) *complete = done;
  return Instance(facts.begin(), facts.end());
}

OracleVerdict oracle_entailment(const Database& database, const RuleSet& rules, const BCQ& query,
                                std::size_t bound) {
  bool complete = false;
  const Instance result = oracle_saturate(database, rules, bound, &complete);
  const Facts facts(result.begin(), result.end());
  Binding b;
  if (join(query.atoms, 0, facts, b, [](const Binding&) { return true; })) return OracleVerdict::Yes;
  return complete ? OracleVerdict::No : OracleVerdict::Unknown;
}

Instance sample_instance(Rng& rng, const Problem& problem, std::size_t max_atoms) {
  Shape s;
  std::set<Term> constants;
  std::map<std::string, std::size_t> preds;
  auto observe = [&](const Atom& a) {
    preds.emplace(a.predicate, a.arity());
    for (const auto& t : a.args) {
      if (t.is_constant()) constants.insert(t);
    }
  };
  for (const auto& a : problem.database) observe(a);
  for (const auto& r : problem.rules) {
    for (const auto& a : r.body) observe(a);
    for (const auto& a : r.head) observe(a);
  }
  if (problem.query) {
    for (const auto& a : problem.query->atoms) observe(a);
  }
  const std::size_t wanted = constants.size() + 2;
  for (int i = 0; constants.size() < wanted; ++i) {
    constants.insert(Term::constant("e" + std::to_string(i)));
  }
  s.constants.assign(constants.begin(), constants.end());
  for (const auto& [p, n] : preds) s.predicates.emplace_back(p, n);

  Instance out;
  const std::uint64_t mode = below(rng, 3);
  if (mode > 0 && problem.database.size() <= max_atoms) out = problem.database;
  if (s.predicates.empty()) return out;
  const std::size_t target = out.size() + below(rng, max_atoms - out.size() + 1);
  for (std::size_t tries = 0; out.size() < target && tries < 10 * max_atoms; ++tries) {
    out.insert(random_atom(rng, s, s.constants));
  }
  if (mode == 2) {
    Instance closed = oracle_saturate(out, problem.rules, 3);
    if (closed.size() <= max_atoms) out = std::move(closed);
  }
  return out;
}

namespace {

bool swap_up(ProofTree& node, const RuleSet& rules) {
  const ProofTree& up = node.premises[0];
  const auto lower = expected_premises(node.conclusion, up.label, rules);
  if (!lower.status || lower.premises.size() != up.premises.size()) return false;
  ProofTree moved{node.conclusion, up.label, {}};
  for (std::size_t i = 0; i < lower.premises.size(); ++i) {
    const auto upper = expected_premises(lower.premises[i], node.label, rules);
    if (!upper.status || upper.premises.size() != 1 ||
        !(upper.premises[0] == up.premises[i].conclusion)) {
      return false;
    }
    moved.premises.push_back(ProofTree{lower.premises[i], node.label, {up.premises[i]}});
  }
  node = std::move(moved);
  return true;
}

void candidates(ProofTree& t, std::vector<ProofTree*>& out) {
  if (t.label.kind == RuleKind::SeqRule && t.premises.size() == 1) {
    const RuleKind k = t.premises[0].label.kind;
    if (k == RuleKind::ExistsR || k == RuleKind::AndR) out.push_back(&t);
  }
  for (auto& p : t.premises) candidates(p, out);
}

}  // namespace

ProofTree scramble_proof(const ProofTree& proof, const RuleSet& rules, Rng& rng,
                         std::size_t moves) {
  ProofTree out = proof;
  for (std::size_t m = 0; m < moves; ++m) {
    std::vector<ProofTree*> spots;
    candidates(out, spots);
    bool moved = false;
    while (!spots.empty() && !moved) {
      const std::size_t i = below(rng, spots.size());
      moved = swap_up(*spots[i], rules);
      spots.erase(spots.begin() + static_cast<std::ptrdiff_t>(i));
    }
    if (!moved) break;
  }
  return out;
}

}  // namespace chaseq
