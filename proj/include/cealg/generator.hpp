#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "cealg/rational.hpp"

namespace cealg {

enum class GeneratorKind {
  Morse,
  DoublePointPos,
  DoublePointNeg,
  ReebChord,
  MixedChord,
  SurgeryA,
  SurgeryB,
  SurgeryC,
};

/// Text token used in documents: morse, dp+, dp-, reeb, mixed, surgery-a, ...
std::string_view to_token(GeneratorKind kind);
std::optional<GeneratorKind> kind_from_token(std::string_view token);

struct Generator {
  std::string name;
  int degree = 0;
  Rational action;
  GeneratorKind kind = GeneratorKind::ReebChord;

  friend bool operator==(const Generator&, const Generator&) = default;
};

/// Returns a description of the first kind/action contradiction, if any:
/// positive double points need positive action, negative ones negative action.
/// Reeb chords are unconstrained here because their sign depends on whether
/// they model wrapped Floer generators or chords of a Legendrian lift.
std::optional<std::string> kind_action_conflict(const Generator& g);

/// Identifier grammar shared by all documents: [A-Za-z_][A-Za-z0-9_.']*
bool is_valid_name(std::string_view name);

}  // namespace cealg
