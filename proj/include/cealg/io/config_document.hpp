#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cealg/io/lexer.hpp"
#include "cealg/pearly.hpp"

namespace cealg::io {

/// A pearly tree or a broken trajectory written out by incidence.
///
///   gen x1 0 1/1 dp+
///   gen y 1 3/1 dp+
///   disk D1 : y <- x1 x2
///   disk D2 : x2 <- x1
///   attach D2 D1 2            # D2's output fills input slot 2 of D1
///   strip S1 : c2 <- c1 bottom: x1 top: y
///   attach D1 S1 top 1        # D1's output is the first top marked point
///   bare x1                   # a tree with no disks
///   global off                # tree-check without the global constraint
///
/// Slots are counted from 1. Strips are chained in the order written.
struct ConfigDocument {
  struct DiskLine {
    std::string name;
    std::string output;
    std::vector<std::string> inputs;
  };
  struct StripLine {
    std::string name;
    std::string out;
    std::string in;
    std::vector<std::string> bottom;
    std::vector<std::string> top;
  };
  struct AttachLine {
    std::string child;
    std::string parent;
    std::optional<Side> side;  // set when the parent is a strip
    std::size_t slot = 1;
  };

  std::vector<Generator> generators;
  std::vector<DiskLine> disks;
  std::vector<StripLine> strips;
  std::vector<AttachLine> attachments;
  std::optional<std::string> bare;
  std::optional<bool> global;
};

/// Throws ParseFailure. Undeclared names, unknown disks or strips, duplicate
/// names and a disk attached twice are parse errors; slot ranges and
/// generator matching are left to the ledgers.
ConfigDocument parse_config_document(std::string_view text);

std::string serialize_config_document(const ConfigDocument& doc);

/// Throws ConfigError when the document describes a trajectory.
PearlyTreeConfig to_tree_config(const ConfigDocument& doc);

/// Throws ConfigError when a disk is left unattached.
BrokenTrajectoryConfig to_trajectory_config(const ConfigDocument& doc);

}  // namespace cealg::io
