#include <random>

#include "cealg/error.hpp"
#include "cealg/io/assignment_document.hpp"
#include "cealg/io/config_document.hpp"
#include "cealg/io/count_document.hpp"
#include "cealg/io/dga_document.hpp"
#include "cealg/io/report.hpp"
#include "doctest.h"
#include "support/random_dga.hpp"

using namespace cealg;
using namespace cealg::io;

namespace {

std::vector<ParseError> errors_of(const std::function<void()>& parse) {
  try {
    parse();
  } catch (const ParseFailure& e) {
    return e.errors();
  }
  return {};
}

}  // namespace

TEST_CASE("tokenizer") {
  const auto lines = tokenize("gen x 1 1/1 dp+   # comment\n\n  d y = a b+1\nattach D P top 2\ndisk D : y <- x1");
  REQUIRE(lines.size() == 4);
  CHECK(lines[0].number == 1);
  CHECK(lines[0].tokens.back().text == "dp+");
  CHECK(lines[1].number == 3);
  std::vector<std::string> texts;
  for (const auto& t : lines[1].tokens) texts.push_back(t.text);
  CHECK(texts == std::vector<std::string>{"d", "y", "=", "a", "b", "+", "1"});
  CHECK(lines[1].tokens[0].column == 3);
  CHECK(lines[3].tokens[4].text == "<-");
  CHECK(tokenize("").empty());
  CHECK(tokenize("# only a comment").empty());
}

TEST_CASE("integers") {
  CHECK(parse_integer("+7") == 7);
  CHECK(parse_integer("-12") == -12);
  CHECK_FALSE(parse_integer("1.0"));
  CHECK_FALSE(parse_integer("x"));
  CHECK_FALSE(parse_integer(""));
}

TEST_CASE("DGA document parse") {
  const auto doc = parse_dga_document(
      "field 3\nddeg -1\ngen x 0 1/1 reeb\ngen y 1 2/1 reeb\nd y = 2 x x + x + 4\nmark x\nsurgery x a 1\n");
  CHECK(doc.field == Field(3));
  CHECK(doc.d_degree == -1);
  CHECK(doc.generators.size() == 2);
  const NcPoly& dy = doc.differentials.at("y");
  CHECK(dy.coefficient(Word{"x", "x"}).value() == 2);
  CHECK(dy.coefficient(Word{}).value() == 1);
  CHECK(doc.marked == std::set<std::string>{"x"});
  CHECK(doc.surgery.at("x") == SurgeryLabel{ChordRole::A, 1, 0, 0});
}

TEST_CASE("DGA document collects every error with its position") {
  const auto errs = errors_of([] {
    parse_dga_document("field 4\ngen x 0 1/1 reeb\ngen x 0 1/1 reeb\ngen z 0 1/1 dp-\nd x = w\nbogus\nsurgery x q 1\n");
  });
  REQUIRE(errs.size() >= 6);
  CHECK(errs[0].line == 1);
  CHECK(errs[0].column == 7);
  for (std::size_t i = 1; i < errs.size(); ++i)
    CHECK(std::tie(errs[i - 1].line, errs[i - 1].column) <= std::tie(errs[i].line, errs[i].column));
  CHECK(to_string(errs[0]).rfind("1:7: ", 0) == 0);
}

TEST_CASE("DGA document errors") {
  CHECK_FALSE(errors_of([] { parse_dga_document("gen x 0 1/1\n"); }).empty());
  CHECK_FALSE(errors_of([] { parse_dga_document("gen x 0 0/1 dp+\n"); }).empty());
  CHECK_FALSE(errors_of([] { parse_dga_document("gen x 0 1/1 reeb\nd x = 1\nd x = 1\n"); }).empty());
  CHECK_FALSE(errors_of([] { parse_dga_document("gen x 0 1/1 reeb\nd x =\n"); }).empty());
  CHECK_FALSE(errors_of([] { parse_dga_document("gen x 0 1/1 reeb\nd x = x + + x\n"); }).empty());
  CHECK_FALSE(errors_of([] { parse_dga_document("gen x 0 1/1 reeb\nmark y\n"); }).empty());
  CHECK_FALSE(errors_of([] { parse_dga_document("gen x 0 1/1 reeb\nsurgery x b 1 0 1\n"); }).empty());
  CHECK_FALSE(errors_of([] { parse_dga_document("field 2\nfield 2\n"); }).empty());
  CHECK(errors_of([] { parse_dga_document("gen x 0 1/1 reeb\nd x = 0\n"); }).empty());
}

TEST_CASE("field override re-reduces coefficients") {
  const std::string text = "field 2\ngen x 0 1/1 reeb\ngen y -1 2/1 reeb\nd y = 2 x + 3\n";
  CHECK(parse_dga_document(text).differentials.at("y") == NcPoly::one(Field(2)));
  const auto over5 = parse_dga_document(text, Field(5));
  CHECK(over5.field == Field(5));
  CHECK(over5.differentials.at("y").coefficient(Word{"x"}).value() == 2);
}

TEST_CASE("DGA documents round trip") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 300; ++i) {
    const Dga a = oracle::random_dga(rng, Field(i % 3 == 0 ? 5 : 2), 1 + i % 9, i % 2 ? 1 : -1);
    const auto doc = to_document(a);
    const std::string text = serialize_dga_document(doc);
    const auto back = parse_dga_document(text);
    CHECK(back == doc);
    CHECK(to_dga(back) == a);
    CHECK(serialize_dga_document(back) == text);
  }
}

TEST_CASE("surgery documents round trip") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    RandomSurgeryOptions o;
    o.k = 1 + static_cast<int>(seed % 3);
    o.max_chords = 3;
    o.seed = seed;
    o.order_reversing = static_cast<int>(seed % 2) * 2;
    const auto s = random_surgery_instance(o);
    const auto text = serialize_dga_document(to_document(s));
    const auto back = to_surgery_algebra(parse_dga_document(text));
    CHECK(back.algebra() == s.algebra());
    CHECK(back.labels() == s.labels());
    CHECK(back.pre_quotient().has_value() == s.pre_quotient().has_value());
    CHECK(back.order_reversing().marked == s.order_reversing().marked);
  }
}

TEST_CASE("count documents") {
  const std::string text =
      "field 3\ngen x 1 1/1 dp+\ngen y 2 3/1 dp+\ngen c1 0 1/1 mixed\ngen c2 1 2/1 mixed\n"
      "count y x = 4\ncount y = -1\nstrip c2 c1 bottom: x top: = 1\nstrip c2 c1 top: x = 2\n";
  const auto doc = parse_count_document(text);
  CHECK(doc.counts.size() == 2);
  CHECK(doc.counts[0].count.value() == 1);
  CHECK(doc.counts[1].count.value() == 2);
  CHECK(doc.count_lines == std::vector<std::size_t>{6, 7});
  CHECK(doc.strips.size() == 2);
  CHECK(doc.strips[0].bottom == std::vector<std::string>{"x"});
  CHECK(doc.strips[1].top == std::vector<std::string>{"x"});
  const auto canon = serialize_count_document(doc);
  CHECK(serialize_count_document(parse_count_document(canon)) == canon);

  const auto disks = load_disk_table(doc);
  CHECK(disks.rejected.empty());
  CHECK(disks.table.double_points().size() == 2);
  const auto strips = load_strip_table(doc);
  CHECK(strips.rejected.empty());
  CHECK(strips.table.dp_l0().size() == 1);
  CHECK(strips.table.dp_l1().size() == 1);

  CHECK_FALSE(errors_of([] { parse_count_document("count y x 1\n"); }).empty());
  CHECK_FALSE(errors_of([] { parse_count_document("count y = one\n"); }).empty());
  CHECK_FALSE(errors_of([] { parse_count_document("strip c1 = 1\n"); }).empty());
  CHECK_FALSE(errors_of([] { parse_count_document("strip c2 c1 left: x = 1\n"); }).empty());
}

TEST_CASE("assignment documents") {
  const auto doc = parse_assignment_document("set b = 4\nset a = -1\n");
  REQUIRE(doc.values.size() == 2);
  const auto e = to_augmentation(doc, Field(3));
  CHECK(e.value("a").value() == 2);
  CHECK(e.value("b").value() == 1);
  CHECK(serialize_assignment(e) == "set a = 2\nset b = 1\n");
  const auto b = to_cochain(doc, Field(2));
  CHECK(serialize_assignment(b) == "set a = 1\n");
  CHECK_FALSE(errors_of([] { parse_assignment_document("set a = 1\nset a = 2\n"); }).empty());
  CHECK_FALSE(errors_of([] { parse_assignment_document("set a 1\n"); }).empty());
  CHECK_FALSE(errors_of([] { parse_assignment_document("let a = 1\n"); }).empty());
  CHECK_FALSE(errors_of([] { parse_assignment_document("set a = x\n"); }).empty());
}

TEST_CASE("config documents") {
  const std::string tree =
      "gen x1 0 1/1 dp+\ngen x2 1 3/1 dp+\ngen y 1 6/1 dp+\n"
      "disk D1 : y <- x1 x2\ndisk D2 : x2 <- x1\nattach D2 D1 2\nglobal off\n";
  const auto doc = parse_config_document(tree);
  CHECK(serialize_config_document(doc) == tree);
  CHECK(doc.global == false);
  const auto t = to_tree_config(doc);
  CHECK(t.disks.size() == 2);
  REQUIRE(t.parent[1].has_value());
  CHECK(t.parent[1]->slot == 1);
  CHECK(tree_ledger(t).telescoped);
  CHECK_THROWS_AS(to_trajectory_config(parse_config_document(tree + "bare x1\n")), ConfigError);

  const std::string traj =
      "gen c1 0 1/1 mixed\ngen c2 1 2/1 mixed\ngen c3 3 4/1 mixed\ngen x 1 1/1 dp+\ngen w 2 3/1 dp+\n"
      "disk D1 : w <- x\nstrip S1 : c2 <- c1\nstrip S2 : c3 <- c2 top: w\nattach D1 S2 top 1\n";
  const auto tdoc = parse_config_document(traj);
  CHECK(serialize_config_document(tdoc) == traj);
  const auto b = to_trajectory_config(tdoc);
  CHECK(b.strips.size() == 2);
  CHECK(std::get<MarkedRef>(b.parent[0]) == MarkedRef{1, Side::Top, 0});
  CHECK_THROWS_AS(to_tree_config(tdoc), ConfigError);
  CHECK_THROWS_AS(to_trajectory_config(parse_config_document("gen x 1 1/1 dp+\ndisk D : x <-\n")), ConfigError);

  CHECK_FALSE(errors_of([] { parse_config_document("disk D : y <- x\n"); }).empty());
  CHECK_FALSE(errors_of([] { parse_config_document("gen x 0 1/1 dp+\ndisk D : x <- x\ndisk D : x <-\n"); }).empty());
  CHECK_FALSE(errors_of([] { parse_config_document("gen x 0 1/1 dp+\ndisk D : x <-\nattach D E 1\n"); }).empty());
  CHECK_FALSE(
      errors_of([] { parse_config_document("gen x 2 1/1 dp+\ndisk D : x <-\ndisk E : x <- x\nattach D E top 1\n"); })
          .empty());
  CHECK_FALSE(errors_of([] { parse_config_document("gen x 2 1/1 dp+\ndisk D : x <-\nattach D D 0\n"); }).empty());
  CHECK_FALSE(errors_of([] { parse_config_document("global maybe\n"); }).empty());
}

TEST_CASE("report document") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  Report r("validate");
  r.add_input("dga", "x.dga", "abc");
  CHECK(r.exit_code() == 0);
  r.add_violation("d-squared", "y", "d(d(y)) = 1");
  CHECK(r.exit_code() == 1);
  r.add_parse_errors("dga", {ParseError{2, 3, "bad"}});
  CHECK(r.exit_code() == 2);
  const Json j = r.to_json();
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"tool", "version", "command", "inputs", "status", "exit_code", "result",
                                         "violations", "errors"});
  CHECK(j["status"] == "input-error");
  CHECK(j["inputs"][0]["sha256"] == sha256_hex("abc"));
  CHECK(j["errors"][0]["line"] == 2);
  const std::string text = render_text(j);
  CHECK(text.find("status: input-error") != std::string::npos);
  CHECK(text.find("check: d-squared") != std::string::npos);
}
