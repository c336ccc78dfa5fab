#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "partrank/cli.hpp"
#include "partrank/records.hpp"
#include "partrank/text_io.hpp"

using namespace partrank;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "partrank");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) {
  const char* d = std::getenv("PARTRANK_DATA");
  return std::string(d ? d : "tests/data") + "/" + name;
}

}  // namespace

TEST_CASE("identity") {
  Run r = cli({"identity"});
  CHECK(r.code == exit_ok);
  Json j = r.json();
  CHECK(j["status"] == "ok");
  CHECK(j["result"]["passed"] == 256);
  CHECK(j["result"]["permutations"] == 24);
  CHECK(j["result"]["degenerate"] == 232);
  CHECK(cli({"identity", "--inject-fault"}).code == exit_violation);
}

TEST_CASE("verify") {
  Run a = cli({"verify", "--expansion", "det4-quadratic", "--field", "int"});
  CHECK(a.code == exit_ok);
  CHECK(a.json()["result"]["terms"] == 3);
  Run b = cli({"verify", "--expansion", "laplace", "--n", "5", "--row", "2", "--field", "7"});
  CHECK(b.code == exit_ok);
  CHECK(b.json()["result"]["terms"] == 5);
  CHECK(cli({"verify", "--expansion", "two-row", "--rows", "2,4"}).code == exit_ok);
  Run c = cli({"verify", "--expansion", "file", "--path", data("broken.dec")});
  CHECK(c.code == exit_violation);
  CHECK(c.json()["result"]["verification"]["witness"] == "(1,2,2)");
  CHECK(cli({"verify", "--expansion", "sideways"}).code == exit_rejected);
  CHECK(cli({"verify", "--expansion", "laplace", "--field", "4"}).code == exit_rejected);
  CHECK(cli({"verify", "--expansion", "file", "--path", data("missing.dec")}).code == exit_rejected);
}

TEST_CASE("ark") {
  Run a = cli({"ark", "--det", "3", "--field", "2", "--method", "closed-form"});
  CHECK(a.code == exit_ok);
  CHECK(a.json()["result"]["report"]["bias"] == "11/32");
  CHECK(a.json()["result"]["report"]["ceil_ark"] == 2);
  Run b = cli({"ark", "--det", "2", "--field", "2", "--method", "exact"});
  CHECK(b.json()["result"]["report"]["bias"] == "1/4");
  CHECK(b.json()["result"]["report"]["ark"] == "2");
  std::vector<std::string> mc{"ark", "--form", data("det3_f2.mlf"), "--field", "2", "--method", "mc",
                              "--samples", "20000", "--seed", "7"};
  Run c1 = cli(mc), c2 = cli(mc);
  CHECK(c1.code == exit_ok);
  CHECK(c1.out == c2.out);
  CHECK(cli({"ark", "--det", "3"}).code == exit_rejected);
  CHECK(cli({"ark", "--det", "3", "--form", "x", "--field", "2"}).code == exit_rejected);
  CHECK(cli({"ark", "--form", data("det3_f2.mlf"), "--field", "3"}).code == exit_rejected);
}

TEST_CASE("budget from the environment") {
  setenv("PARTRANK_BUDGET", "10", 1);
  Run r = cli({"ark", "--det", "3", "--field", "2", "--method", "gradient"});
  unsetenv("PARTRANK_BUDGET");
  CHECK(r.code == exit_rejected);
  CHECK(r.err.find("budget of 10;") != std::string::npos);
  CHECK(cli({"ark", "--det", "3", "--field", "2", "--method", "gradient"}).code == exit_ok);
  CHECK(cli({"search", "--det", "3", "--field", "2", "--max-rank", "2", "--budget", "1000"}).code == exit_rejected);
}

TEST_CASE("search") {
  CHECK(cli({"search", "--det", "2", "--field", "2", "--max-rank", "1"}).json()["result"]["verdict"] == "exhausted-none");
  CHECK(cli({"search", "--det", "2", "--field", "2", "--max-rank", "2"}).json()["result"]["verdict"] == "found");
  Run r = cli({"search", "--det", "3", "--field", "2", "--max-rank", "2"});
  CHECK(r.code == exit_ok);
  CHECK(r.json()["result"]["verdict"] == "exhausted-none");
}

TEST_CASE("restrict") {
  Run a = cli({"restrict", "--decomposition", data("laplace3_f2.dec"), "--field", "2"});
  CHECK(a.code == exit_ok);
  CHECK(a.json()["result"]["branch"] == "certificate");
  CHECK(a.json()["result"]["k"] == 1);
  CHECK(a.json()["result"]["r"] == 3);
  Run b = cli({"restrict", "--decomposition", data("det4q_f2.dec")});
  CHECK(b.json()["result"]["k"] == 2);
  CHECK(b.json()["result"]["r"] == 3);
  Run c = cli({"restrict", "--decomposition", data("synthetic.dec"), "--target", data("synthetic.mlf")});
  CHECK(c.code == exit_ok);
  CHECK(c.json()["result"]["branch"] == "reduced");
  CHECK(c.json()["result"]["new_terms"] == 1);
  CHECK(cli({"restrict", "--decomposition", data("broken.dec")}).code == exit_violation);
  CHECK(cli({"restrict", "--decomposition", data("laplace3_f2.dec"), "--field", "5"}).code == exit_rejected);
}

TEST_CASE("experiment") {
  auto dir = std::filesystem::temp_directory_path() / "partrank_cli_test";
  std::filesystem::create_directories(dir);
  std::string p1 = (dir / "a").string(), p2 = (dir / "b").string();
  Run a = cli({"experiment", "--config", data("ensemble_small.json"), "--out", p1});
  Run b = cli({"experiment", "--config", data("ensemble_small.json"), "--out", p2});
  CHECK(a.code == exit_ok);
  CHECK(a.out == b.out);
  CHECK(read_file(p1 + ".json") == read_file(p2 + ".json"));
  CHECK(read_file(p1 + ".tsv") == read_file(p2 + ".tsv"));
  CHECK(read_file(p1 + ".tsv").rfind("index\tbias\tark\tmethod\n", 0) == 0);
  Run z = cli({"experiment", "--config", data("ensemble_r0.json")});
  CHECK(z.json()["result"]["mean_bias_exact"] == "1/1");
  Run bad = cli({"experiment", "--config", data("ensemble_bad.json")});
  CHECK(bad.code == exit_rejected);
  CHECK(bad.err.find("split:") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("other subcommands") {
  CHECK(cli({"separation"}).json()["result"]["witnessed_ratio"] == "3/2");
  CHECK(cli({"script", "--path", data("transpose.script")}).code == exit_ok);
  CHECK(cli({"script", "--path", data("wrong_expectation.script")}).code == exit_violation);
  CHECK(cli({"script", "--path", data("bad_syzygy.script")}).code == exit_rejected);
  CHECK(cli({"minors", "--rows", "1,3"}).json()["result"]["rank"] == 6);
  Run e = cli({"export", "--what", "laplace", "--n", "3", "--row", "1", "--field", "2"});
  CHECK(e.code == exit_ok);
  CHECK(e.out == read_file(data("laplace3_f2.dec")));
}

TEST_CASE("usage") {
  CHECK(cli({}).code == exit_rejected);
  CHECK(cli({"frobnicate"}).code == exit_rejected);
  CHECK(cli({"search", "--det", "two"}).code == exit_rejected);
  for (const char* sub : {"identity", "verify", "ark", "search", "restrict", "experiment", "export", "separation",
                          "script", "minors"}) {
    Run h = cli({sub, "--help"});
    CHECK(h.code == exit_ok);
    CHECK(h.out.find("--help") != std::string::npos);
  }
  Run h = cli({"search", "--help"});
  CHECK(h.out.find("--max-rank INT") != std::string::npos);
  CHECK(h.out.find("[2]") != std::string::npos);
}
