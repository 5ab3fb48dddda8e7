#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "qmut/cli.hpp"
#include "qmut/quiver_io.hpp"
#include "qmut/series.hpp"

using namespace qmut;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream o, e;
  int c = run_cli(args, o, e);
  return {c, o.str(), e.str()};
}

std::filesystem::path tmp_file(const std::string& name, const std::string& text) {
  std::filesystem::path p = std::filesystem::temp_directory_path() / ("qmut_cli_" + name);
  std::ofstream f(p, std::ios::binary);
  f << text;
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::filesystem::path seed(const std::string& name) {
  return std::filesystem::path(QMUT_SEEDS_DIR) / name;
}

Quiver markov() {
  Quiver q = Quiver::from_labeled_arrows(
      3, 1, {{0, 1, {0, 1}}, {1, 2, {0, 1}}, {2, 0, {0, 1}}});
  return q;
}

}  // namespace

TEST_CASE("cli: mutate applies sequences and normalizes documents") {
  auto h3 = seed("h3.json").string();

  // no sequence: pure normalization, document on stdout, table on stderr
  CliResult norm = run({"mutate", h3});
  REQUIRE(norm.code == kExitOk);
  CHECK(norm.err.find("arrow") != std::string::npos);
  Quiver q = quiver_from_json(norm.out);
  CHECK(q.rank() == 3);

  // seq k,k is the identity on the serialized document
  CliResult twice = run({"mutate", h3, "--seq", "2,2"});
  CHECK(twice.code == kExitOk);
  CHECK(twice.out == norm.out);

  // output to a file: table moves to stdout
  auto out = std::filesystem::temp_directory_path() / "qmut_cli_mut.json";
  CliResult f = run({"mutate", h3, "--seq", "1", "-o", out.string()});
  CHECK(f.code == kExitOk);
  CHECK(f.out.find("arrow") != std::string::npos);
  CHECK(quiver_from_json(slurp(out)).rank() == 3);
}

TEST_CASE("cli: mutating the Markov quiver keeps all labels 0/1") {
  CliResult r = run({"mutate", seed("markov.json").string(), "--seq", "1"});
  REQUIRE(r.code == kExitOk);
  Quiver q = quiver_from_json(r.out);
  auto labels = q.weight_labels();
  REQUIRE(labels.has_value());
  CHECK(labels->size() == 3);
  for (AngleLabel l : *labels) CHECK(l == AngleLabel{0, 1});
}

TEST_CASE("cli: parse and vertex errors use distinct exit codes") {
  auto bad = tmp_file("bad.json", "{ not json");
  CliResult r = run({"explore", bad.string()});
  CHECK(r.code == kExitParse);
  CHECK(r.err.find("error") != std::string::npos);

  CliResult v = run({"mutate", seed("h3.json").string(), "--seq", "7"});
  CHECK(v.code == kExitBadVertex);
  CHECK(v.err.find("vertex 7") != std::string::npos);

  CliResult u = run({"no-such-command"});
  CHECK(u.code == kExitParse);
}

TEST_CASE("cli: explore exit codes follow the verdict") {
  CliResult fin = run({"explore", seed("h3.json").string(), "--report", "json"});
  CHECK(fin.code == kExitOk);
  CHECK(fin.out.find("\"size\": 6") != std::string::npos);
  CHECK(fin.out.find("\"verdict\": \"finite\"") != std::string::npos);

  auto w3 = tmp_file("w3.json",
                     R"({"schema_version":1,"rank":2,"ambient":1,)"
                     R"("arrows":[{"from":1,"to":2,"coeffs":["3"]}]})");
  CliResult inf = run({"explore", w3.string(), "--report", "json"});
  CHECK(inf.code == kExitInfinite);
  CHECK(inf.out.find("\"rule\": \"weight-bound\"") != std::string::npos);

  CliResult tiny = run({"explore", seed("h3.json").string(), "--max-quivers", "2"});
  CHECK(tiny.code == kExitBudget);
}

TEST_CASE("cli: explore reports are byte-identical across runs and thread counts") {
  auto h4ppp = seed("h4ppp.json").string();
  CliResult a = run({"explore", h4ppp, "--report", "json", "--threads", "1"});
  CliResult b = run({"explore", h4ppp, "--report", "json", "--threads", "3"});
  CliResult c = run({"explore", h4ppp, "--report", "json", "--threads", "3"});
  CHECK(a.out == b.out);
  CHECK(b.out == c.out);
  CHECK(a.code == kExitOk);
}

TEST_CASE("cli: mod-opposite counting changes the headline size only") {
  CliResult plain = run({"explore", seed("h3.json").string(), "--report", "json"});
  CliResult mo = run({"explore", seed("h3.json").string(), "--report", "json", "--mod-opposite"});
  CHECK(plain.out.find("\"counting\": \"plain\"") != std::string::npos);
  CHECK(mo.out.find("\"counting\": \"mod-opposite\"") != std::string::npos);
  CHECK(mo.out.find("\"size\": 4") != std::string::npos);
  CHECK(mo.out.find("\"size_plain\": 6") != std::string::npos);
}

TEST_CASE("cli: classify-rank3 names the normal form") {
  CliResult r = run({"classify-rank3", seed("h3.json").string(), "--report", "json"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("\"family\": \"path\"") != std::string::npos);

  CliResult wrong = run({"classify-rank3", seed("h4.json").string()});
  CHECK(wrong.code == kExitParse);
}

TEST_CASE("cli: series lists tuples, mutates parameters, writes standard forms") {
  CliResult list = run({"series", "--family", "odd", "--n", "3", "--list"});
  REQUIRE(list.code == kExitOk);
  std::size_t lines = std::count(list.out.begin(), list.out.end(), '\n');
  CHECK(lines == valid_tuples(SeriesFamily::Odd, 3).size());

  auto out = std::filesystem::temp_directory_path() / "qmut_cli_series.json";
  CliResult form = run({"series", "--family", "even-b", "--n", "2", "--seq", "1,2,1",
                        "-o", out.string()});
  REQUIRE(form.code == kExitOk);
  Quiver q = quiver_from_json(slurp(out));
  CHECK(q.rank() == 4);
  CHECK(q.ambient() == 4);

  CliResult badtuple = run({"series", "--family", "odd", "--n", "3", "--tuple", "9,9,9,9"});
  CHECK(badtuple.code == kExitParse);
  CliResult badvertex = run({"series", "--family", "odd", "--n", "3", "--seq", "5"});
  CHECK(badvertex.code == kExitBadVertex);
}

TEST_CASE("cli: realize emits a Gram document and class reports") {
  auto gram = std::filesystem::temp_directory_path() / "qmut_cli_gram.json";
  CliResult r = run({"realize", seed("h3.json").string(), "-o", gram.string()});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("corank: 0") != std::string::npos);
  Realization g = realization_from_json(slurp(gram));
  CHECK(g.rank() == 3);

  CliResult cls = run({"realize", seed("markov.json").string(), "--class", "--report", "json"});
  CHECK(cls.code == kExitOk);
  CHECK(cls.out.find("\"corank\": 2") != std::string::npos);
  CHECK(cls.out.find("\"ok\": true") != std::string::npos);

  // an oriented integer triangle above the weight bound realizes nothing
  auto ttt = tmp_file("ttt.json",
                      R"({"schema_version":1,"rank":3,"ambient":1,"arrows":[)"
                      R"({"from":1,"to":2,"coeffs":["3"]},{"from":2,"to":3,"coeffs":["3"]},)"
                      R"({"from":3,"to":1,"coeffs":["3"]}]})");
  CliResult none = run({"realize", ttt.string()});
  CHECK(none.code == kExitInfinite);
}

TEST_CASE("cli: export-dot follows the drawing conventions") {
  CliResult h3 = run({"export-dot", seed("h3.json").string()});
  REQUIRE(h3.code == kExitOk);
  CHECK(h3.out.find("v1 -> v2;") != std::string::npos);          // weight 1: unlabeled
  CHECK(h3.out.find("label=\"1/5\"") != std::string::npos);      // golden label shown
  CliResult mk = run({"export-dot", seed("markov.json").string()});
  std::size_t doubled = 0, pos = 0;
  while ((pos = mk.out.find("black:black", pos)) != std::string::npos) ++doubled, ++pos;
  CHECK(doubled == 3);

  auto lonely = tmp_file("lonely.json",
                         R"({"schema_version":1,"rank":3,"ambient":1,"arrows":[]})");
  CliResult iso = run({"export-dot", lonely.string()});
  CHECK(iso.out.find("v3 [label=\"3\"]") != std::string::npos);
  CHECK(iso.out.find("->") == std::string::npos);
}

TEST_CASE("cli: path finds joining sequences and reports strangers") {
  auto h3 = seed("h3.json").string();
  CliResult norm = run({"mutate", h3});
  auto target = tmp_file("target.json", norm.out);
  Quiver start = quiver_from_json(norm.out);

  CliResult moved = run({"mutate", h3, "--seq", "2,1"});
  auto moved_file = tmp_file("moved.json", moved.out);
  CliResult p = run({"path", moved_file.string(), "--to", target.string()});
  REQUIRE(p.code == kExitOk);

  // replay the printed sequence and compare canonical forms
  Quiver walk = quiver_from_json(moved.out);
  std::istringstream seq(p.out);
  std::string tok;
  while (std::getline(seq, tok, ',')) {
    if (tok == "(empty)\n" || tok.empty()) break;
    walk = walk.mutated(std::stoi(tok) - 1);
  }
  CHECK(canonical_key(walk) == canonical_key(start));

  CliResult stranger = run({"path", h3, "--to", seed("markov.json").string(),
                            "--max-depth", "6"});
  CHECK(stranger.code == kExitBudget);
}

TEST_CASE("cli: every shipped seed loads, normalizes, and round-trips") {
  std::size_t count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(QMUT_SEEDS_DIR)) {
    if (entry.path().extension() != ".json") continue;
    ++count;
    CliResult r = run({"mutate", entry.path().string()});
    REQUIRE_MESSAGE(r.code == kExitOk, entry.path().string());
    // normalized output is a fixed point of serialization
    auto again = tmp_file("roundtrip.json", r.out);
    CliResult r2 = run({"mutate", again.string()});
    CHECK(r2.out == r.out);
  }
  CHECK(count == 16);
}

TEST_CASE("cli: help and missing subcommand") {
  CliResult help = run({"--help"});
  CHECK(help.code == kExitOk);
  CHECK(help.out.find("mutate") != std::string::npos);
  CliResult none = run({});
  CHECK(none.code == kExitParse);
}
