#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "picwb/automaton.hpp"
#include "picwb/tiling.hpp"

using namespace picwb;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string put(const std::string& name, const std::string& text) {
  auto dir = fs::temp_directory_path() / "picwb_cli_test";
  fs::create_directories(dir);
  auto path = (dir / name).string();
  std::ofstream(path) << text;
  return path;
}

std::string alternating() {
  return tiling_to_json({{"a", "b"}, {"a", "b"}, {{"a", "a"}, {"b", "b"}}, {TileSet{1, {{"#", "a"}, {"a", "b"}, {"b", "a"}, {"b", "#"}}}}});
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("check reports membership") {
  auto ts = put("alt.json", alternating());
  auto r = run({"check", "--picture", put("ab.pic", "1 2\na b\na b\n"), "--tiling", ts});
  CHECK(r.code == 0);
  CHECK(r.out == "VERDICT: MEMBER\n");
  r = run({"check", "--picture", put("aa.pic", "1 2\na b\na a\n"), "--tiling", ts});
  CHECK(r.code == 1);
  CHECK(r.out == "VERDICT: NON-MEMBER\n");

  auto sentence = put("only_a.eso", "(forall (x) (Q_a x))");
  r = run({"check", "--picture", put("aaa.pic", "1 3\na b\na a a\n"), "--sentence", sentence});
  CHECK(r.code == 0);
  r = run({"check", "--picture", put("sq.pic", "2 2\n0 1\n0 1\n1 0\n"), "--oracle", "mirror"});
  CHECK(r.out == "VERDICT: MEMBER\n");
}

TEST_CASE("compile then compare") {
  auto ts = put("alt.json", alternating());
  auto eso = put("alt.eso", "");
  CHECK(run({"compile", "tiling-to-eso", "--in", ts, "--out", eso}).code == 0);
  auto r = run({"equiv", "--a", ts, "--b", eso, "--encoding", "pixel", "--max-n", "4"});
  CHECK(r.code == 0);
  CHECK(r.out == "EQUIVALENT up to n=4\n");

  auto back = put("alt_back.json", "");
  CHECK(run({"compile", "eso-to-tiling", "--in", eso, "--out", back, "--alphabet", "a,b"}).code == 0);
  r = run({"equiv", "--a", ts, "--b", back, "--max-n", "5"});
  CHECK(r.out == "EQUIVALENT up to n=5\n");
}

TEST_CASE("inequivalence prints a counterexample") {
  auto ts = put("alt.json", alternating());
  auto only_a = put("only_a.eso", "(forall (x) (Q_a x))");
  auto r = run({"equiv", "--a", ts, "--b", only_a, "--max-n", "3"});
  CHECK(r.code == 1);
  CHECK(r.out.find("VERDICT: INEQUIVALENT (a=") == 0);
  CHECK(r.out.find("\nCOUNTEREXAMPLE: 1 1 / a b / a\n") != std::string::npos);
}

TEST_CASE("automaton round trip through the command line") {
  auto ca = put("rand.json", "");
  CHECK(run({"random", "automaton", "--gamma", "3", "--sigma", "2", "--out", ca, "--seed", "4"}).code == 0);
  auto eso = put("rand.eso", "");
  CHECK(run({"compile", "ca-to-eso", "--in", ca, "--out", eso}).code == 0);
  auto r = run({"equiv", "--a", ca, "--b", eso, "--max-n", "3"});
  CHECK(r.out == "EQUIVALENT up to n=3\n");
}

TEST_CASE("perm-tree and normal forms") {
  auto r = run({"perm-tree", "--d", "4"});
  CHECK(r.code == 0);
  CHECK(count_lines(r.out) == 24);
  CHECK(r.out.rfind("perm 1234 parent - edge -\n", 0) == 0);

  auto card = put("card.txt", "(atleast 2 x (Q_1 x))");
  auto mono = put("card.eso", "");
  CHECK(run({"normalize", "cardinality", "--in", card, "--out", mono, "--alphabet", "0,1", "--encoding", "pixel"}).code == 0);
  CHECK(run({"check", "--picture", put("b3.pic", "1 3\n0 1\n1 0 1\n"), "--sentence", mono, "--encoding", "pixel"}).code == 0);
  CHECK(run({"check", "--picture", put("b2.pic", "1 3\n0 1\n1 0 0\n"), "--sentence", mono, "--encoding", "pixel"}).code == 1);
}

TEST_CASE("errors exit with status 2") {
  CHECK(run({"check"}).code == 2);
  CHECK(run({"compile", "nonsense", "--in", "x"}).code == 2);
  auto r = run({"check", "--picture", "/nonexistent/p.pic", "--oracle", "mirror"});
  CHECK(r.code == 2);
  CHECK(r.err.find("/nonexistent/p.pic") != std::string::npos);
  auto bad = put("bad.eso", "(forall (x) (Q_z x))");
  CHECK(run({"check", "--picture", put("a.pic", "1 1\na b\na\n"), "--sentence", bad}).code == 2);
  auto wide = put("wide.card", "(atleast 9 x (Q_1 x))");
  r = run({"normalize", "cardinality", "--in", wide, "--alphabet", "0,1", "--max-k", "3"});
  CHECK(r.code == 2);
}
