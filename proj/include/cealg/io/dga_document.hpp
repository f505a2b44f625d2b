#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cealg/dga.hpp"
#include "cealg/io/lexer.hpp"
#include "cealg/surgery.hpp"

namespace cealg::io {

/// A DGA file: field, differential degree, generators, differentials, the
/// order-reversing marking and surgery role labels.
///
///   field 2
///   ddeg 1
///   gen y -1 3/2 reeb
///   d y = x1 x2 + 1
///   mark q1
///   surgery a_1 a 1
///   surgery b_1_2_1 b 1 2 1
struct DgaDocument {
  Field field = Field(2);
  int d_degree = 1;
  std::vector<Generator> generators;
  std::map<std::string, NcPoly> differentials;  // nonzero only
  std::set<std::string> marked;
  std::map<std::string, SurgeryLabel> surgery;

  friend bool operator==(const DgaDocument&, const DgaDocument&) = default;
};

/// Throws ParseFailure listing every syntax and semantic error. When
/// `field_override` is given, integer coefficients are reduced into it
/// instead of the declared field.
DgaDocument parse_dga_document(std::string_view text, std::optional<Field> field_override = std::nullopt);

/// Canonical text: field, ddeg, gens in declaration order, d lines in
/// generator order, marks sorted, surgery labels in generator order.
std::string serialize_dga_document(const DgaDocument& doc);

/// The algebra on every declared generator (marked ones included).
Dga to_dga(const DgaDocument& doc);

DgaDocument to_document(const Dga& dga);

/// The surgery algebra of the document: when chords are marked, the algebra
/// is the order-reversing quotient and the document algebra is kept as the
/// pre-quotient. Throws QuotientError or DgaError.
SurgeryAlgebra to_surgery_algebra(const DgaDocument& doc);

/// Document form of a surgery algebra (the pre-quotient one when present).
DgaDocument to_document(const SurgeryAlgebra& s);

}  // namespace cealg::io
