#include <benchmark/benchmark.h>

#include "chaseq/bridge.hpp"
#include "chaseq/chase.hpp"
#include "chaseq/corpus.hpp"
#include "chaseq/parallel.hpp"
#include "chaseq/search.hpp"

using namespace chaseq;

namespace {

// Path graph e(n0,n1), ..., closed under transitivity by the chase.
Problem path_problem(std::size_t n) {
  Problem p;
  auto node = [](std::size_t i) { return Term::constant("n" + std::to_string(i)); };
  for (std::size_t i = 0; i + 1 < n; ++i) p.database.insert(Atom("e", {node(i), node(i + 1)}));
  const Term x = Term::variable("x"), y = Term::variable("y"), z = Term::variable("z");
  p.rules.push_back(ExistentialRule::make("base", {Atom("e", {x, y})}, {Atom("t", {x, y})}));
  p.rules.push_back(ExistentialRule::make("step", {Atom("t", {x, y}), Atom("t", {y, z})},
                                          {Atom("t", {x, z})}));
  p.query = BCQ::make({}, {Atom("t", {node(0), node(n - 1)})});
  return p;
}

Instance closed_path(std::size_t n) {
  const Problem p = path_problem(n);
  return chase(p.database, p.rules).final_instance;
}

void BM_find_triggers_serial(benchmark::State& state) {
  const Problem p = path_problem(state.range(0));
  const Instance i = closed_path(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(find_triggers(i, p.rules));
}
BENCHMARK(BM_find_triggers_serial)->Arg(16)->Arg(32)->Arg(64);

void BM_find_triggers_parallel(benchmark::State& state) {
  const Problem p = path_problem(state.range(0));
  const Instance i = closed_path(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(find_triggers_parallel(i, p.rules));
}
BENCHMARK(BM_find_triggers_parallel)->Arg(16)->Arg(32)->Arg(64);

void BM_chase_transitive(benchmark::State& state) {
  const Problem p = path_problem(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(chase(p.database, p.rules));
}
BENCHMARK(BM_chase_transitive)->Arg(8)->Arg(16)->Arg(32);

void BM_chase_successor(benchmark::State& state) {
  const Term x = Term::variable("x"), y = Term::variable("y"), z = Term::variable("z");
  const RuleSet succ = {ExistentialRule::make("s", {Atom("r", {x, y})}, {Atom("r", {y, z})})};
  const Instance d = {Atom("r", {Term::constant("a"), Term::constant("b")})};
  for (auto _ : state) benchmark::DoNotOptimize(chase(d, succ, state.range(0)));
}
BENCHMARK(BM_chase_successor)->Arg(100)->Arg(1000);

void BM_prove_transitive(benchmark::State& state) {
  const Problem p = path_problem(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(prove(p.database, p.rules, *p.query));
}
BENCHMARK(BM_prove_transitive)->Arg(8)->Arg(16);

void BM_prove_corpus(benchmark::State& state) {
  const auto problems = generate_kbs(Profile::TerminatingSmall, 1, 30);
  for (auto _ : state) {
    for (const auto& p : problems) benchmark::DoNotOptimize(prove(p.database, p.rules, *p.query));
  }
  state.SetItemsProcessed(state.iterations() * problems.size());
}
BENCHMARK(BM_prove_corpus);

void BM_check_and_normalize(benchmark::State& state) {
  const Problem p = path_problem(12);
  const ProofTree proof = *prove(p.database, p.rules, *p.query).proof;
  Rng rng(3);
  const ProofTree messy = scramble_proof(proof, p.rules, rng, 16);
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_proof(messy, p.rules));
    benchmark::DoNotOptimize(normalize_proof(messy, p.rules));
  }
}
BENCHMARK(BM_check_and_normalize);

}  // namespace

BENCHMARK_MAIN();
