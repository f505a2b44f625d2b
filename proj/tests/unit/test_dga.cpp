#include <random>

#include "cealg/dga.hpp"
#include "cealg/error.hpp"
#include "doctest.h"
#include "support/oracle.hpp"
#include "support/random_dga.hpp"

using namespace cealg;

namespace {

Generator gen(std::string name, int degree, int action, GeneratorKind kind = GeneratorKind::ReebChord) {
  return Generator{std::move(name), degree, Rational(action), kind};
}

NcPoly poly(Field f, std::initializer_list<std::pair<Word, int>> terms) {
  NcPoly p(f);
  for (const auto& [w, c] : terms) p.add_term(w, f(c));
  return p;
}

}  // namespace

TEST_CASE("construction rejects malformed algebras") {
  Field f(2);
  CHECK_THROWS_AS(Dga(f, 1, {gen("x", 0, 1), gen("x", 0, 2)}, {}), DgaError);
  CHECK_THROWS_AS(Dga(f, 1, {gen("9x", 0, 1)}, {}), DgaError);
  CHECK_THROWS_AS(Dga(f, 1, {gen("x", 0, 1)}, {{"y", NcPoly::one(f)}}), DgaError);
  CHECK_THROWS_AS(Dga(f, 1, {gen("x", 0, 1)}, {{"x", NcPoly::letter(f, "z")}}), DgaError);
  CHECK_THROWS_AS(Dga(f, 1, {gen("x", 0, 1)}, {{"x", NcPoly::one(Field(3))}}), FieldMismatch);
  CHECK_THROWS_AS(Dga(f, 1, {gen("x", 0, -1, GeneratorKind::DoublePointPos)}, {}), DgaError);
}

TEST_CASE("zero differentials are not stored") {
  Field f(2);
  Dga a(f, 1, {gen("x", 0, 1)}, {{"x", NcPoly(f)}});
  CHECK(a.differentials().empty());
  CHECK(a.differential("x").is_zero());
  CHECK_THROWS_AS(a.generator("nope"), DgaError);
}

TEST_CASE("signed Leibniz rule on a hand example") {
  // d a = 1, a has degree -1: d(a a) = 1 a - a 1 = 0 over any field,
  // d(b a) with |b| = 0, d b = 0 is b.
  Field f(3);
  Dga a(f, 1, {gen("a", -1, 1), gen("b", 0, 1)}, {{"a", NcPoly::one(f)}});
  CHECK(apply_differential(a, poly(f, {{Word{"a", "a"}, 1}})).is_zero());
  CHECK(apply_differential(a, poly(f, {{Word{"b", "a"}, 1}})) == NcPoly::letter(f, "b"));
  CHECK(apply_differential(a, poly(f, {{Word{"a", "b"}, 1}})) == NcPoly::letter(f, "b"));
  // |a| odd: d(a a a) = a a, alternating signs 1 - 1 + 1.
  CHECK(apply_differential(a, poly(f, {{Word{"a", "a", "a"}, 1}})) == poly(f, {{Word{"a", "a"}, 1}}));
}

TEST_CASE("validators report each failing generator") {
  Field f(2);
  Dga bad(f, 1, {gen("x", -1, 1), gen("y", -2, 2), gen("z", 0, 1)},
          {{"y", NcPoly::letter(f, "x")}, {"x", NcPoly::one(f)}, {"z", NcPoly::letter(f, "x") * NcPoly::letter(f, "x")}});
  const auto sq = validate_d_squared(bad);
  CHECK(sq.has("d-squared"));
  CHECK(sq.violations.size() == 1);
  CHECK(sq.violations[0].subject == "y");
  const auto gr = validate_grading(bad);
  REQUIRE(gr.violations.size() == 1);
  CHECK(gr.violations[0].subject == "z");
  const auto ac = validate_action(bad);
  REQUIRE(ac.violations.size() == 1);
  CHECK(ac.violations[0].subject == "z");
}

TEST_CASE("max_action and restrict_to") {
  Field f(2);
  Dga a(f, 1, {gen("x", 0, 1), gen("y", -1, 5), gen("w", -1, 7)},
        {{"y", NcPoly::letter(f, "x") * NcPoly::letter(f, "x")}, {"w", NcPoly::letter(f, "y")}});
  CHECK(max_action(a, NcPoly(f)) == std::nullopt);
  CHECK(max_action(a, NcPoly::letter(f, "x") + NcPoly::letter(f, "w")) == Rational(7));
  const Dga r = restrict_to(a, {"x", "y"});
  CHECK(r.generators().size() == 2);
  CHECK(r.differential("y") == a.differential("y"));
}

TEST_CASE("random algebras satisfy their construction invariants") {
  std::mt19937_64 rng(99);
  for (std::uint32_t p : {2u, 3u, 5u})
    for (int i = 0; i < 60; ++i) {
      const Dga a = oracle::random_dga(rng, Field(p), 8);
      CHECK(validate_d_squared(a).ok());
      CHECK(validate_grading(a).ok());
      CHECK(validate_action(a).ok());
    }
}

TEST_CASE("differential agrees with the recursive reference") {
  std::mt19937_64 rng(3);
  for (std::uint32_t p : {2u, 3u, 7u})
    for (int i = 0; i < 80; ++i) {
      const Dga a = oracle::random_dga(rng, Field(p), 7);
      std::vector<std::string> names;
      for (const auto& g : a.generators()) names.push_back(g.name);
      const auto D = oracle::defs(a);
      for (int j = 0; j < 10; ++j) {
        const auto q = oracle::random_poly(rng, a.field(), names, 4, 4);
        CHECK(oracle::same(oracle::diff(D, oracle::from(q)), apply_differential(a, q)));
      }
    }
}
