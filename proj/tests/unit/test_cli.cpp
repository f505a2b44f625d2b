#include <filesystem>
#include <fstream>
#include <sstream>

#include "cealg/cli.hpp"
#include "cealg/io/dga_document.hpp"
#include "cealg/io/report.hpp"
#include "doctest.h"

using namespace cealg;

namespace {

const std::string corpus = CEALG_CORPUS_DIR;

struct Run {
  int code;
  std::string out, err;
  io::Json json() const { return io::Json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string in_corpus(const std::string& name) { return corpus + "/" + name; }

}  // namespace

TEST_CASE("version and usage") {
  const auto v = run({"--version"});
  CHECK(v.code == 0);
  CHECK(v.out.find("0.1.0") != std::string::npos);
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"validate"}).code == 2);
  CHECK(run({"--format", "yaml", "validate", in_corpus("example.dga")}).code == 2);
  CHECK(run({"mc-check", in_corpus("lift-trivial.counts")}).code == 2);
}

TEST_CASE("validate reports in both formats") {
  const auto text = run({"validate", in_corpus("example.dga")});
  CHECK(text.code == 0);
  CHECK(text.out.find("status: pass") != std::string::npos);

  const auto j = run({"--format", "json", "validate", in_corpus("dsquared-fault.dga")});
  CHECK(j.code == 1);
  const auto doc = j.json();
  CHECK(doc["status"] == "violations");
  CHECK(doc["exit_code"] == 1);
  CHECK(doc["violations"][0]["check"] == "d-squared");
  CHECK(doc["inputs"][0]["role"] == "dga");

  const auto missing = run({"--format", "json", "validate", in_corpus("missing.dga")});
  CHECK(missing.code == 2);
  CHECK(missing.json()["errors"][0]["kind"] == "io");

  const auto parse = run({"--format", "json", "validate", in_corpus("parse-fault.dga")});
  CHECK(parse.code == 2);
  CHECK(parse.json()["errors"][0]["kind"] == "parse");
  CHECK(parse.json()["errors"][0].contains("line"));
}

TEST_CASE("augment lists the augmentations") {
  const auto r = run({"--format", "json", "augment", in_corpus("example.dga"), "--list"});
  CHECK(r.code == 0);
  const auto res = r.json()["result"];
  CHECK(res["count"] == 1);
  CHECK(res["augmentations"][0]["a"] == 1);
  CHECK(res["augmentations"][0]["b"] == 1);
  CHECK(run({"augment", in_corpus("example.dga"), "--field", "4"}).code == 2);
  CHECK(run({"augment", in_corpus("example.dga"), "--field", "3"}).code == 0);
}

TEST_CASE("ce-lift writes the algebra it builds") {
  const auto path = std::filesystem::temp_directory_path() / "cealg-test-lift.dga";
  std::filesystem::remove(path);
  const auto r = run({"ce-lift", in_corpus("lift-trivial.counts"), "--output", path.string()});
  CHECK(r.code == 0);
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  const auto doc = io::parse_dga_document(ss.str());
  CHECK(doc.generators.size() == 2);
  CHECK(run({"validate", path.string()}).code == 0);
  std::filesystem::remove(path);
}

TEST_CASE("mc-check and deform") {
  CHECK(run({"mc-check", in_corpus("mc-two-points.counts"), "--cochain", in_corpus("mc-two-points.set")}).code == 0);
  const auto bad = run({"--format", "json", "mc-check", in_corpus("mc-two-points.counts"), "--cochain",
                        in_corpus("mc-two-points-wrong.set")});
  CHECK(bad.code == 1);
  CHECK(bad.json()["violations"][0]["check"] == "maurer-cartan");
  CHECK(run({"deform", in_corpus("strips.counts"), "--b0", in_corpus("strips-b0.set")}).code == 0);
  CHECK(run({"deform", in_corpus("strips-squared-fault.counts")}).code == 1);
}

TEST_CASE("surgery emits verified certificates") {
  const auto r = run({"--format", "json", "surgery", in_corpus("surgery-k2.dga")});
  CHECK(r.code == 0);
  const auto res = r.json()["result"];
  CHECK(res["k"] == 2);
  CHECK(res["certified"] == res["base_augmentations"]);
  for (const auto& c : res["certificates"]) {
    CHECK(c["verified"] == true);
    CHECK(c["augmentation"]["a_1"] == 1);
  }
  const auto q = run({"--format", "json", "quotient", in_corpus("quotient-fault.dga")});
  CHECK(q.code == 1);
  CHECK(q.json()["violations"][0]["check"] == "quotient");
}

TEST_CASE("tree and trajectory checks") {
  CHECK(run({"tree-check", in_corpus("tree-two-disks.cfg")}).code == 0);
  CHECK(run({"tree-check", in_corpus("tree-rigid-fault.cfg")}).code == 1);
  CHECK(run({"tree-check", in_corpus("traj-broken.cfg")}).code == 2);
  CHECK(run({"traj-check", in_corpus("traj-broken.cfg")}).code == 0);
}

TEST_CASE("search at small bounds") {
  const auto r = run({"--format", "json", "search", "--family", "all", "--max-disks", "2", "--max-strips", "2",
                      "--max-attached", "1", "--max-marked", "1"});
  CHECK(r.code == 0);
  CHECK(r.err.find("estimate") != std::string::npos);
  const auto b = run({"--format", "json", "search", "--family", "trees", "--limit", "100"});
  CHECK(b.code == 2);
  CHECK(b.json()["errors"][0]["kind"] == "bound");
}

TEST_CASE("corpus manifest") {
  const auto r = run({"corpus", "--dir", corpus});
  CHECK(r.code == 0);
  CHECK(r.err.find("FAIL") == std::string::npos);
  CHECK(run({"corpus", "--dir", in_corpus("no-such-dir")}).code == 2);
}
