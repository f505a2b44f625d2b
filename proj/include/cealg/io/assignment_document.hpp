#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cealg/augmentation.hpp"
#include "cealg/io/lexer.hpp"
#include "cealg/mc_bridge.hpp"

namespace cealg::io {

/// `set <name> = <value>` lines, used both for augmentations and for
/// bounding cochains. Values stay integers until a field is chosen.
struct AssignmentDocument {
  std::vector<std::pair<std::string, std::int64_t>> values;
};

/// Throws ParseFailure; a name set twice is an error.
AssignmentDocument parse_assignment_document(std::string_view text);

/// Canonical text: names sorted, values reduced into `field`, zeros dropped.
std::string serialize_assignment(const Augmentation& e);
std::string serialize_assignment(const BoundingCochain& b);

Augmentation to_augmentation(const AssignmentDocument& doc, Field field);
BoundingCochain to_cochain(const AssignmentDocument& doc, Field field);

}  // namespace cealg::io
