#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>
#include <string_view>

namespace cealg {

/// Exact rational used for actions and energies. Arbitrary precision, so
/// strict inequalities between sums of actions are decided without tolerance.
using Rational = boost::multiprecision::cpp_rational;

/// Canonical text form "p/q": sign carried by p, gcd(p, q) = 1, q > 0.
/// Integers are written with an explicit "/1".
std::string to_string(const Rational& r);

/// Accepts "p/q" or a bare integer "p"; returns nullopt on malformed input
/// or a zero denominator.
std::optional<Rational> parse_rational(std::string_view text);

}  // namespace cealg
