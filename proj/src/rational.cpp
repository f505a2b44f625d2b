#include "cealg/rational.hpp"

#include <cctype>

namespace cealg {

std::string to_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

namespace {

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

boost::multiprecision::cpp_int to_int(std::string_view s) {
  bool negative = false;
  if (s.front() == '-' || s.front() == '+') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  boost::multiprecision::cpp_int v{std::string(s)};
  if (negative) v = -v;
  return v;
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const auto num = text.substr(0, slash);
  if (!is_integer_literal(num)) return std::nullopt;
  if (slash == std::string_view::npos) return Rational(to_int(num));
  const auto den = text.substr(slash + 1);
  // Denominators are unsigned: "1/-2" is not canonical input.
  if (den.empty() || den.front() == '-' || den.front() == '+' || !is_integer_literal(den)) return std::nullopt;
  auto d = to_int(den);
  if (d == 0) return std::nullopt;
  return Rational(to_int(num), d);
}

}  // namespace cealg
