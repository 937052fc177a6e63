#include <filesystem>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

#include "doctest.h"
#include "chaseq/cli.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kData = CHASEQ_DATA_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = chaseq::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "chaseq_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string read(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

// Fresh names come from a process-wide counter; number them by first use.
std::string canonical_fresh(const std::string& text) {
  static const std::regex fresh("_z[0-9]+");
  std::map<std::string, std::size_t> seen;
  std::string out;
  auto last = text.cbegin();
  for (std::sregex_iterator it(text.begin(), text.end(), fresh), end; it != end; ++it) {
    out.append(last, it->prefix().second);
    const auto [pos, inserted] = seen.emplace(it->str(), seen.size() + 1);
    out += "_z" + std::to_string(pos->second);
    last = it->suffix().first;
  }
  out.append(last, text.cend());
  return out;
}

}  // namespace

TEST_CASE("chase exit codes") {
  const Run done = cli({"chase", kData + "/empty.kb"});
  CHECK(done.code == 0);
  CHECK(done.out.find("terminated: yes") != std::string::npos);

  const Run inf = cli({"--fuel", "20", "--format", "machine", "chase", kData + "/infinite.kb"});
  CHECK(inf.code == 3);
  CHECK(inf.out.find("status fuel-exhausted") != std::string::npos);

  const Run ex = cli({"--format", "machine", "chase", kData + "/basic.kb", "--dot",
                      scratch("ex.dot").string()});
  CHECK(ex.code == 0);
  CHECK(ex.out.find("final A('c','a')") != std::string::npos);
  CHECK(read(scratch("ex.dot")).find("digraph") == 0);
}

TEST_CASE("prove then check-proof") {
  const std::string proof = scratch("ex.proof").string();
  const Run p = cli({"--format", "machine", "prove", kData + "/basic.kb", "--emit-proof", proof});
  CHECK(p.code == 0);
  CHECK(p.out.rfind("verdict proved\nsteps 3\n", 0) == 0);
  const Run c = cli({"--format", "machine", "check-proof", kData + "/basic.kb", proof});
  CHECK(c.code == 0);
  CHECK(c.out == "valid\n");

  // The same proof does not prove the query from another database.
  const Run other = cli({"check-proof", kData + "/empty.kb", proof});
  CHECK(other.code == 1);
  CHECK(other.out.rfind("invalid", 0) == 0);

  // Corrupt one antecedent atom in the root.
  std::string text = read(proof);
  const auto pos = text.find("M('c','b') |-");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 10, "M('c','c')");
  write(scratch("bad.proof"), text);
  const Run bad = cli({"check-proof", kData + "/basic.kb", scratch("bad.proof").string()});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("invalid") == 0);
}

TEST_CASE("prove refutes and runs out of fuel") {
  const std::string model = scratch("model.txt").string();
  const Run r = cli({"--format", "machine", "prove", kData + "/empty.kb", "--emit-model", model});
  CHECK(r.code == 1);
  CHECK(r.out.rfind("verdict refuted", 0) == 0);
  CHECK(read(model) == "atom p('a')\n");

  const Run u = cli({"--fuel", "50", "--format", "machine", "prove", kData + "/infinite.kb"});
  CHECK(u.code == 3);
  CHECK(u.out.rfind("verdict unknown\nsteps 50\n", 0) == 0);
  const Run again = cli({"--fuel", "50", "--format", "machine", "prove", kData + "/infinite.kb"});
  CHECK(again.code == 3);
  CHECK(canonical_fresh(again.out) == canonical_fresh(u.out));
  CHECK(canonical_fresh("r(_z9,_z4) r(_z4,_z9)") == "r(_z1,_z2) r(_z2,_z1)");
}

TEST_CASE("translate") {
  const std::string proof = scratch("tr.proof").string();
  const Run to_proof = cli({"--format", "machine", "translate", kData + "/basic.kb",
                            "--direction", "chase-to-proof"});
  CHECK(to_proof.code == 0);
  write(proof, to_proof.out);
  CHECK(cli({"check-proof", kData + "/basic.kb", proof}).code == 0);

  const Run back = cli({"--format", "machine", "translate", kData + "/basic.kb", "--direction",
                        "proof-to-chase", "--proof", proof});
  CHECK(back.code == 0);
  CHECK(back.out.find("step r1") != std::string::npos);
  CHECK(back.out.find("witness {x:='b'}") != std::string::npos);

  CHECK(cli({"translate", kData + "/basic.kb", "--direction", "proof-to-chase"}).code == 2);
  CHECK(cli({"translate", kData + "/empty.kb", "--direction", "chase-to-proof"}).code == 1);
}

TEST_CASE("hom") {
  write(scratch("small.inst"), "atom p('a')\n");
  CHECK(cli({"hom", scratch("small.inst").string(), kData + "/empty.kb"}).code == 0);
  CHECK(cli({"hom", kData + "/basic.kb", scratch("small.inst").string()}).code == 1);
}

TEST_CASE("usage and parse errors") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"--help"}).code == 0);
  CHECK(cli({"chase"}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"chase", scratch("missing.kb").string()}).code == 2);
  write(scratch("broken.kb"), "p(a).\nq(a, $).\n");
  const Run broken = cli({"chase", scratch("broken.kb").string()});
  CHECK(broken.code == 2);
  CHECK(broken.err.find("2:") != std::string::npos);
  CHECK(cli({"prove", kData + "/basic.kb", "--strategy", "sideways"}).code == 2);
}
