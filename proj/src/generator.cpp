#include "cealg/generator.hpp"

#include <array>
#include <cctype>
#include <utility>

namespace cealg {

namespace {

constexpr std::array<std::pair<GeneratorKind, std::string_view>, 8> kTokens{{
    {GeneratorKind::Morse, "morse"},
    {GeneratorKind::DoublePointPos, "dp+"},
    {GeneratorKind::DoublePointNeg, "dp-"},
    {GeneratorKind::ReebChord, "reeb"},
    {GeneratorKind::MixedChord, "mixed"},
    {GeneratorKind::SurgeryA, "surgery-a"},
    {GeneratorKind::SurgeryB, "surgery-b"},
    {GeneratorKind::SurgeryC, "surgery-c"},
}};

}  // namespace

std::string_view to_token(GeneratorKind kind) {
  for (const auto& [k, t] : kTokens)
    if (k == kind) return t;
  return "?";
}

std::optional<GeneratorKind> kind_from_token(std::string_view token) {
  for (const auto& [k, t] : kTokens)
    if (t == token) return k;
  return std::nullopt;
}

std::optional<std::string> kind_action_conflict(const Generator& g) {
  if (g.kind == GeneratorKind::DoublePointPos && g.action <= 0)
    return "generator " + g.name + " is a positive double point but has action " + to_string(g.action);
  if (g.kind == GeneratorKind::DoublePointNeg && g.action >= 0)
    return "generator " + g.name + " is a negative double point but has action " + to_string(g.action);
  return std::nullopt;
}

bool is_valid_name(std::string_view name) {
  if (name.empty()) return false;
  const auto head = static_cast<unsigned char>(name.front());
  if (!std::isalpha(head) && head != '_') return false;
  for (char c : name) {
    const auto u = static_cast<unsigned char>(c);
    if (!std::isalnum(u) && c != '_' && c != '.' && c != '\'') return false;
  }
  return true;
}

}  // namespace cealg
