#include <random>

#include "cealg/error.hpp"
#include "cealg/field.hpp"
#include "cealg/generator.hpp"
#include "cealg/ncpoly.hpp"
#include "cealg/rational.hpp"
#include "doctest.h"
#include "support/oracle.hpp"

using namespace cealg;

TEST_CASE("field accepts primes up to 97 only") {
  for (std::uint32_t p : {2u, 3u, 5u, 7u, 89u, 97u}) CHECK_NOTHROW(Field{p});
  for (std::uint32_t p : {0u, 1u, 4u, 9u, 91u, 101u}) CHECK_THROWS_AS(Field{p}, Error);
  CHECK(is_prime(97));
  CHECK_FALSE(is_prime(1));
}

TEST_CASE("scalars reduce and invert") {
  Field f(7);
  CHECK(f(-1).value() == 6);
  CHECK(f(15).value() == 1);
  CHECK((f(3) * f(5)).value() == 1);
  for (int a = 1; a < 7; ++a) CHECK((f(a) * f(a).inverse()).value() == 1);
  CHECK_THROWS_AS(f(0).inverse(), Error);
  CHECK((-f(2)).value() == 5);
  CHECK((f(2) - f(5)).value() == 4);
}

TEST_CASE("scalar arithmetic across fields is rejected") {
  CHECK_THROWS_AS(Field(2)(1) + Field(3)(1), FieldMismatch);
  CHECK_THROWS_AS(Field(5)(1) * Field(3)(2), FieldMismatch);
}

TEST_CASE("scalar arithmetic matches integer arithmetic mod p") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> v(-500, 500);
  for (std::uint32_t p : {2u, 3u, 13u, 97u}) {
    Field f(p);
    const long P = p;
    for (int i = 0; i < 2000; ++i) {
      const long a = v(rng), b = v(rng);
      CHECK((f(a) + f(b)).value() == static_cast<std::uint32_t>(((a + b) % P + P) % P));
      CHECK((f(a) * f(b)).value() == static_cast<std::uint32_t>(((a * b) % P + P) % P));
    }
  }
}

TEST_CASE("rational text form") {
  CHECK(to_string(Rational(3)) == "3/1");
  CHECK(to_string(Rational(-6) / 4) == "-3/2");
  CHECK(parse_rational("6/4") == Rational(3, 2));
  CHECK(parse_rational("-7") == Rational(-7));
  CHECK(parse_rational("123456789012345678901234567890/3").has_value());
  CHECK_FALSE(parse_rational("1/0"));
  CHECK_FALSE(parse_rational("1.5"));
  CHECK_FALSE(parse_rational("/2"));
  CHECK_FALSE(parse_rational(""));
  CHECK_FALSE(parse_rational("2/"));
}

TEST_CASE("generator kinds and names") {
  for (auto k : {GeneratorKind::Morse, GeneratorKind::DoublePointPos, GeneratorKind::DoublePointNeg,
                 GeneratorKind::ReebChord, GeneratorKind::MixedChord, GeneratorKind::SurgeryA, GeneratorKind::SurgeryB,
                 GeneratorKind::SurgeryC})
    CHECK(kind_from_token(to_token(k)) == k);
  CHECK(to_token(GeneratorKind::DoublePointPos) == "dp+");
  CHECK_FALSE(kind_from_token("dp"));
  CHECK(kind_action_conflict(Generator{"x", 1, Rational(-1), GeneratorKind::DoublePointPos}));
  CHECK(kind_action_conflict(Generator{"x", 1, Rational(1), GeneratorKind::DoublePointNeg}));
  CHECK_FALSE(kind_action_conflict(Generator{"x", 1, Rational(-1), GeneratorKind::ReebChord}));
  CHECK(is_valid_name("a_1'"));
  CHECK(is_valid_name("x.2"));
  CHECK_FALSE(is_valid_name("1x"));
  CHECK_FALSE(is_valid_name("a-b"));
  CHECK_FALSE(is_valid_name(""));
}

TEST_CASE("polynomials are canonical") {
  Field f(3);
  NcPoly p(f);
  p.add_term(Word{"x", "y"}, f(1));
  p.add_term(Word{"x", "y"}, f(2));
  CHECK(p.is_zero());
  CHECK(to_string(p) == "0");
  p.add_term(Word{}, f(2));
  p.add_term(Word{"y"}, f(1));
  CHECK(to_string(p) == "2 + y");
  CHECK(NcPoly::letter(f, "x") * NcPoly::letter(f, "y") != NcPoly::letter(f, "y") * NcPoly::letter(f, "x"));
  CHECK_THROWS_AS(NcPoly::one(Field(2)) + NcPoly::one(Field(3)), FieldMismatch);
  CHECK_THROWS_AS(p.add_term(Word{"z"}, Field(2)(1)), FieldMismatch);
}

TEST_CASE("polynomial product agrees with the reference product") {
  std::mt19937_64 rng(5);
  const std::vector<std::string> letters{"a", "b", "c"};
  for (std::uint32_t p : {2u, 5u}) {
    Field f(p);
    for (int i = 0; i < 500; ++i) {
      const auto x = oracle::random_poly(rng, f, letters, 4, 3);
      const auto y = oracle::random_poly(rng, f, letters, 4, 3);
      CHECK(oracle::same(oracle::mul(oracle::from(x), oracle::from(y)), x * y));
      CHECK(oracle::same(oracle::plus(oracle::from(x), oracle::from(y)), x + y));
      CHECK(oracle::same(oracle::plus(oracle::from(x), oracle::from(y), -1), x - y));
    }
  }
}
