#include "chaseq/cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "chaseq/bridge.hpp"
#include "chaseq/frontend.hpp"
#include "chaseq/search.hpp"

namespace chaseq {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << content;
}

Problem load_problem(const std::string& path) { return parse_problem(read_file(path)); }

/// A KB file's database, or a machine-format instance.
Instance load_instance(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return parse_problem(text).database;
  } catch (const ParseError& kb_error) {
    try {
      return parse_machine_instance(text);
    } catch (const ParseError&) {
      throw kb_error;
    }
  }
}

std::string atom_lines(const Instance& i, bool machine, const char* prefix) {
  std::string out;
  for (const auto& a : i) {
    out += machine ? std::string(prefix) + to_machine(a) : "  " + to_text(a);
    out += "\n";
  }
  return out;
}

const BCQ& require_query(const Problem& p) {
  if (!p.query) throw UsageError("the knowledge base has no query");
  return *p.query;
}

struct Globals {
  std::size_t fuel = kDefaultFuel;
  std::string format = "text";
  std::uint64_t seed = 0;
  bool machine() const { return format == "machine"; }
};

int cmd_chase(const Globals& g, const std::string& file, const std::string& dot, std::ostream& out) {
  const Problem p = load_problem(file);
  const ChaseOutcome run = chase(p.database, p.rules, g.fuel);
  if (g.machine()) {
    out << to_machine(run.derivation, p.rules) << atom_lines(run.final_instance, true, "final ")
        << "status " << (run.terminated ? "terminated" : "fuel-exhausted") << "\n";
  } else {
    out << "terminated: " << (run.terminated ? "yes" : "no") << "\n"
        << "steps: " << run.steps_used << "\n"
        << "derivation:\n"
        << to_text(run.derivation, p.rules) << "final instance (" << run.final_instance.size()
        << " atoms):\n"
        << atom_lines(run.final_instance, false, "");
  }
  if (!dot.empty()) write_file(dot, to_dot(run.final_instance));
  return run.terminated ? 0 : 3;
}

int cmd_prove(const Globals& g, const std::string& file, const std::string& strategy,
              const std::string& proof_path, const std::string& model_path, std::ostream& out) {
  const Problem p = load_problem(file);
  const BCQ& q = require_query(p);
  SearchOptions options;
  options.fuel = g.fuel;
  options.strategy =
      strategy == "listed-order" ? SearchStrategy::ListedOrder : SearchStrategy::RulesFirst;
  const SearchOutcome r = prove(p.database, p.rules, q, options);
  if (g.machine()) {
    out << "verdict " << to_string(r.verdict) << "\nsteps " << r.steps_used << "\n";
    if (r.proof) {
      out << to_machine(*r.proof);
    } else {
      out << to_machine(r.model);
    }
  } else {
    out << "verdict: " << to_string(r.verdict) << "\nrule steps: " << r.steps_used << "\n";
    if (r.proof) {
      out << "proof:\n" << to_text(*r.proof);
    } else {
      out << (r.verdict == Verdict::Refuted ? "counter-model" : "partial instance") << " ("
          << r.model.size() << " atoms):\n"
          << atom_lines(r.model, false, "");
    }
  }
  if (!proof_path.empty() && r.proof) write_file(proof_path, to_machine(*r.proof));
  if (!model_path.empty() && !r.proof) write_file(model_path, to_machine(r.model));
  switch (r.verdict) {
    case Verdict::Proved:
      return 0;
    case Verdict::Refuted:
      return 1;
    case Verdict::Unknown:
      return 3;
  }
  return 3;
}

int cmd_check(const Globals& g, const std::string& file, const std::string& proof_path,
              bool permissive, std::ostream& out) {
  const Problem p = load_problem(file);
  const ProofTree proof = parse_machine_proof(read_file(proof_path));
  Sequent expected{as_formulas(p.database), {}};
  if (p.query) expected.consequent.insert(p.query->to_formula());
  if (!(proof.conclusion == expected)) {
    out << (g.machine() ? "invalid end-sequent\n"
                        : "invalid: end-sequent is not the knowledge base's database ⊢ query\n");
    return 1;
  }
  CheckOptions options;
  options.permissive_witness = permissive;
  const ProofCheck c = check_proof(proof, p.rules, options);
  if (c) {
    out << (g.machine() ? "valid\n" : "valid proof (" + std::to_string(proof.node_count()) +
                                          " inferences)\n");
    return 0;
  }
  std::string path;
  for (auto k : c.path) path += (path.empty() ? "" : ".") + std::to_string(k);
  out << "invalid " << to_string(c.failure.reason) << " at node [" << path
      << "]: " << c.failure.message << "\n";
  return 1;
}

int cmd_translate(const Globals& g, const std::string& file, const std::string& direction,
                  const std::string& proof_path, std::ostream& out) {
  const Problem p = load_problem(file);
  if (direction == "chase-to-proof") {
    const BCQ& q = require_query(p);
    const ChaseAnswer ans = bcq_entailed_by_chase(p.database, p.rules, q, g.fuel);
    if (ans.verdict != Entailment::Yes) {
      out << "query " << (ans.verdict == Entailment::No ? "not entailed" : "undecided within fuel")
          << "\n";
      return ans.verdict == Entailment::No ? 1 : 3;
    }
    const ProofTree proof = witness_to_proof(ans.run.derivation, *ans.witness, q, p.rules);
    out << (g.machine() ? to_machine(proof) : to_text(proof));
    return 0;
  }
  if (proof_path.empty()) throw UsageError("--proof is required for proof-to-chase");
  const ProofTree proof = parse_machine_proof(read_file(proof_path));
  const ProofCheck c = check_proof(proof, p.rules);
  if (!c) {
    out << "invalid proof: " << c.failure.message << "\n";
    return 1;
  }
  const auto [d, mu] = proof_to_witness(normalize_proof(proof, p.rules), p.rules);
  if (g.machine()) {
    out << to_machine(d, p.rules) << "witness " << to_machine(mu) << "\n";
  } else {
    out << "initial: " << to_text(d.initial()) << "\n"
        << to_text(d, p.rules) << "witness: " << to_text(mu) << "\n";
  }
  return 0;
}

int cmd_hom(const Globals& g, const std::string& a, const std::string& b, std::ostream& out) {
  const auto h = find_homomorphism(load_instance(a), load_instance(b));
  if (!h) {
    out << "no homomorphism\n";
    return 1;
  }
  out << (g.machine() ? to_machine(*h) : to_text(*h)) << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Query answering over existential rules by chase and proof search", "chaseq"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--fuel", g.fuel, "rule applications allowed")->capture_default_str();
  app.add_option("--format", g.format, "output format")
      ->check(CLI::IsMember({"text", "machine"}))
      ->capture_default_str();
  app.add_option("--seed", g.seed, "reserved; nothing is randomized");

  std::string file, second, dot, strategy = "rules-first", emit_proof, emit_model, direction,
                                      proof_path;
  bool permissive = false;

  auto* chase_cmd = app.add_subcommand("chase", "run the restricted chase");
  chase_cmd->add_option("file", file, "knowledge base")->required();
  chase_cmd->add_option("--dot", dot, "write the final instance as DOT");

  auto* prove_cmd = app.add_subcommand("prove", "search for a proof of the query");
  prove_cmd->add_option("file", file, "knowledge base")->required();
  prove_cmd->add_option("--emit-proof", emit_proof, "write the proof (machine format)");
  prove_cmd->add_option("--emit-model", emit_model, "write the counter-model or partial instance");
  prove_cmd->add_option("--strategy", strategy, "step order")
      ->check(CLI::IsMember({"rules-first", "listed-order"}));

  auto* check_cmd = app.add_subcommand("check-proof", "check a machine-format proof");
  check_cmd->add_option("file", file, "knowledge base")->required();
  check_cmd->add_option("proof", second, "proof file")->required();
  check_cmd->add_flag("--permissive", permissive, "accept any exists-right witness");

  auto* translate_cmd = app.add_subcommand("translate", "translate between chase and proofs");
  translate_cmd->add_option("file", file, "knowledge base")->required();
  translate_cmd->add_option("--direction", direction, "chase-to-proof or proof-to-chase")
      ->required()
      ->check(CLI::IsMember({"chase-to-proof", "proof-to-chase"}));
  translate_cmd->add_option("--proof", proof_path, "proof file for proof-to-chase");

  auto* hom_cmd = app.add_subcommand("hom", "find a homomorphism between instances");
  hom_cmd->add_option("from", file, "instance or knowledge base")->required();
  hom_cmd->add_option("to", second, "instance or knowledge base")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (chase_cmd->parsed()) return cmd_chase(g, file, dot, out);
    if (prove_cmd->parsed()) return cmd_prove(g, file, strategy, emit_proof, emit_model, out);
    if (check_cmd->parsed()) return cmd_check(g, file, second, permissive, out);
    if (translate_cmd->parsed()) return cmd_translate(g, file, direction, proof_path, out);
    if (hom_cmd->parsed()) return cmd_hom(g, file, second, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const SyntaxError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace chaseq
