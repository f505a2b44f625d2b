#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cealg/io/lexer.hpp"
#include "cealg/mc_bridge.hpp"

namespace cealg::io {

/// Disk and strip counts with the generators they mention.
///
///   field 2
///   gen x 1 1/1 dp+
///   gen y 2 3/1 dp+
///   count y x = 1
///   count y = 1
///   gen c1 0 1/1 mixed
///   strip c2 c1 bottom: x top: = 1
///
/// Line numbers of the entries are kept so that load-time rejections can be
/// traced back to the file.
struct CountDocument {
  Field field = Field(2);
  std::vector<Generator> generators;
  std::vector<DiskEntry> counts;
  std::vector<std::size_t> count_lines;
  std::vector<StripEntry> strips;
  std::vector<std::size_t> strip_lines;
};

/// Throws ParseFailure. Names in entries are not resolved here: undeclared
/// ones are rejected, with a reason, when the table is loaded.
CountDocument parse_count_document(std::string_view text);

/// Canonical text: field, gens, count lines, strip lines, in input order.
std::string serialize_count_document(const CountDocument& doc);

/// Disk table over the dp+ generators.
DiskCountTable::LoadResult load_disk_table(const CountDocument& doc);

/// Strip table over the mixed chords. Double points of L0 are the dp+
/// generators used as bottom marked points, those of L1 the ones used on top.
StripCountTable::LoadResult load_strip_table(const CountDocument& doc);

}  // namespace cealg::io
