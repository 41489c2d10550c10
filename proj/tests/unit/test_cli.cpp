#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace roughmax;
using namespace roughmax::cli;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::size_t grammar_position(const std::string& spec) {
  try {
    parse_growth_spec(spec);
  } catch (const GrammarError& e) {
    return e.position();
  }
  return std::string::npos;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "roughmax_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("growth grammar") {
  const auto g = parse_growth_spec("pure:1.5:1");
  CHECK(g.variant() == Variant::PurePower);
  CHECK(g.c() == 1.5);
  const auto pl = parse_growth_spec("powerlog:1.02:1:1");
  CHECK(pl.variant() == Variant::PowerLog);
  CHECK(pl.params().A == 1.0);
  CHECK(parse_growth_spec("powerexplog:1.05:2:1:0.5").params().B == 0.5);
  CHECK(parse_growth_spec("poweriterlog:1.05:1:2").params().m == 2);
  CHECK(parse_growth_spec("powerlog:1.02:1:1@10").x0() == 10.0);

  CHECK(grammar_position("cubic:1:1") == 0);
  CHECK(grammar_position("pure:abc:1") == 5);
  CHECK(grammar_position("pure:1.5") == 8);
  CHECK(grammar_position("pure:1.5:1:7") == 11);
  CHECK(grammar_position("poweriterlog:1.05:1:1.5") == 20);
  CHECK(grammar_position("pure:1.5:1@x") == 11);
  // well-formed but outside the admissible class
  CHECK_THROWS_AS(parse_growth_spec("pure:3:1"), DomainError);
}

TEST_CASE("config round trip") {
  ExperimentConfig c;
  c.command = "expsum";
  c.growth = "powerlog:1.02:1:1@3";
  c.n_lo = 5;
  c.n_hi = 11;
  c.seed = 99;
  c.format = "json";
  c.params = {{"lemma", "3.4"}, {"params", "m=2,kappa=0.5"}, {"odd;key", "a=b\\c"}};
  c.workers = 3;
  c.out = "/tmp/x;y.csv";
  c.destinations = {{"emit", "/tmp/e=f"}};
  CHECK(ExperimentConfig::parse(c.to_string()) == c);
  CHECK(c.experiment_string().find("workers") == std::string::npos);
  CHECK(c.experiment_string().find("/tmp") == std::string::npos);
  CHECK_THROWS_AS(ExperimentConfig::parse("command=x;colour=red"), DomainError);
}

TEST_CASE("seqset for x^{3/2} up to 11") {
  const auto emit = scratch("seq.txt");
  const auto r = invoke({"seqset", "--h", "pure:1.5:1", "--nmax", "11", "--emit", emit.string()});
  REQUIRE(r.code == kExitOk);
  std::ifstream is(emit);
  std::string line;
  std::vector<std::string> body;
  while (std::getline(is, line)) {
    if (!line.empty() && line[0] != '#') body.push_back(line);
  }
  CHECK(body == std::vector<std::string>{"n", "1", "2", "5", "8", "11"});
  CHECK(r.out.rfind("# roughmax ", 0) == 0);
  CHECK(r.out.find("N,count,phi_N,ratio") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(invoke({"frobnicate"}).code == kExitInvalid);
  CHECK(invoke({}).code == kExitInvalid);
  CHECK(invoke({"seqset", "--h", "pure:1.5"}).code == kExitInvalid);
  CHECK(invoke({"seqset", "--nmax", "-3"}).code == kExitInvalid);
  CHECK(invoke({"expsum", "--lemma", "9.9"}).code == kExitInvalid);
  CHECK(invoke({"cz", "--lambda", "1"}).code == kExitInvalid);
  CHECK(invoke({"--help"}).code == kExitOk);
  const auto bad = invoke({"seqset", "--h", "pure:1.5:1@-3"});
  CHECK(bad.code == kExitInvalid);
  CHECK(bad.err.find("roughmax:") != std::string::npos);
}

TEST_CASE("json output mirrors the table") {
  const auto r = invoke({"--format", "json", "seqset", "--h", "pure:1.5:1", "--nmax", "64"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("\"columns\"") != std::string::npos);
  CHECK(r.out.find("\"config\"") != std::string::npos);
}

TEST_CASE("output does not depend on the worker count") {
  const std::vector<std::vector<std::string>> cmds{
      {"expsum", "--h", "pure:1.05:1", "--sweep", "10..12"},
      {"weaktype", "--h", "pure:1.05:1", "--nlo", "6", "--nhi", "9", "--corpus", "random:8:1"},
      {"kernel-decomp", "--h", "pure:1.05:1", "--kmin", "8", "--kmax", "11"},
  };
  for (auto cmd : cmds) {
    auto one = cmd, four = cmd;
    one.insert(one.begin(), {"--workers", "1"});
    four.insert(four.begin(), {"--workers", "4"});
    const auto a = invoke(one), b = invoke(four);
    REQUIRE(a.code == kExitOk);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("cz subcommand writes atoms") {
  const auto input = scratch("f.csv");
  {
    std::ofstream os(input);
    os << "x,value\n0,8\n5,1\n";
  }
  const auto dir = scratch("atoms");
  std::filesystem::remove_all(dir);
  const auto r = invoke({"cz", "--input", input.string(), "--lambda", "1", "--emit-atoms", dir.string()});
  REQUIRE(r.code == kExitOk);
  CHECK(std::filesystem::exists(dir / "good.csv"));
  CHECK(std::filesystem::exists(dir / "atom_s3_j0.csv"));
  CHECK(r.out.find("invariants=ok") != std::string::npos);
}

TEST_CASE("ergodic subcommand") {
  const auto r = invoke({"ergodic", "--h", "pure:1.05:1", "--sweep", "8..12", "--oscillation", "2"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("pointwise proxy") != std::string::npos);
}
