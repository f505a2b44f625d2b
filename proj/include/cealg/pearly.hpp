#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cealg/generator.hpp"
#include "cealg/report.hpp"

namespace cealg {

// ---------------------------------------------------------------------------
// Components
// ---------------------------------------------------------------------------

/// A holomorphic disk recorded by its output corner and its input corners in
/// boundary order. Zero inputs are allowed.
struct DiskComponent {
  Generator output;
  std::vector<Generator> inputs;

  /// action(output) - sum action(inputs)
  Rational energy() const;
  /// degree(output) - sum degree(inputs) == 2 - #inputs
  bool rigid() const;
};

Rational disk_energy(const DiskComponent& d);

/// Input slot `slot` of disk `disk`.
struct SlotRef {
  std::size_t disk = 0;
  std::size_t slot = 0;
  friend bool operator==(const SlotRef&, const SlotRef&) = default;
};

/// A pearly tree after degeneration: gradient edges are constant, so an edge
/// joins a disk output to an input slot carrying the same generator.
///
/// parent[i] is the slot disk i plugs into, or nullopt for the root disk.
/// A configuration without disks is a bare gradient edge at `bare`.
struct PearlyTreeConfig {
  std::vector<DiskComponent> disks;
  std::vector<std::optional<SlotRef>> parent;
  std::optional<Generator> bare;
};

struct TreeLedger {
  std::size_t m = 0;  // disk components
  std::size_t k = 0;  // external inputs
  long lhs = 0;       // degree(root) - sum degree(external inputs)
  long rhs = 0;       // m + 1 - k
  bool telescoped = false;
};

/// Throws ConfigError on a malformed incidence (no unique root, a cycle, a
/// slot used twice, an edge joining different generators) or a disk that is
/// not rigid.
TreeLedger tree_ledger(const PearlyTreeConfig& t);

struct TreeVerdict {
  /// Hypothesis violations; when nonempty there is no verdict.
  ValidationReport hypotheses;
  TreeLedger ledger;
  /// Every disk output, root included, has positive action, obtained disk by
  /// disk from positive inputs and positive energy.
  bool positivity_propagates = false;
  bool output_positive = false;
  bool global_constraint_imposed = false;
  /// lhs == 2 - k.
  bool global_constraint_holds = false;
  /// lhs + k - 1, the component count the ledger forces under the global
  /// constraint.
  std::optional<long> forced_m;
  bool single_disk = false;

  bool has_verdict() const { return hypotheses.ok(); }
};

/// Hypotheses: every external input is a dp+ generator with positive action,
/// every disk is rigid and nonconstant (positive energy), and there is at
/// least one disk. Structural problems are reported as "structure".
TreeVerdict degeneration_verdict_tree(const PearlyTreeConfig& t, bool global_degree_constraint);

/// A strip from c_in to c_out with boundary marked points on L0 (bottom) and
/// L1 (top).
struct StripComponent {
  Generator out;
  Generator in;
  std::vector<Generator> bottom;
  std::vector<Generator> top;

  /// degree(out) - degree(in) - sum degree(marked) == 1 - #marked
  bool rigid() const;
};

enum class Side { Bottom, Top };

/// Marked point `slot` on the `side` boundary of strip `strip`.
struct MarkedRef {
  std::size_t strip = 0;
  Side side = Side::Bottom;
  std::size_t slot = 0;
  friend bool operator==(const MarkedRef&, const MarkedRef&) = default;
};

using DiskAttachment = std::variant<SlotRef, MarkedRef>;

/// Strips in order (strip v+1 starts where strip v ends) and disks attached at
/// marked points or at input slots of other attached disks. Marked points
/// with no disk are external leaves.
struct BrokenTrajectoryConfig {
  std::vector<StripComponent> strips;
  std::vector<DiskComponent> disks;
  std::vector<DiskAttachment> parent;
};

struct TrajectoryLedger {
  std::size_t K = 0;   // strips
  std::size_t m0 = 0;  // disks hanging off the bottom boundary
  std::size_t m1 = 0;  // disks hanging off the top boundary
  std::size_t M = 0;   // K + m0 + m1
  std::size_t k = 0;   // external leaves on the bottom side
  std::size_t l = 0;   // external leaves on the top side
  long lhs = 0;        // |c_out(K)| - |c_in(1)| - sum of external degrees
  long rhs = 0;        // M - k - l
  bool telescoped = false;
};

/// Throws ConfigError on a matching violation (broken chords differ, a disk
/// output differs from its marked point or slot, a slot or marked point used
/// twice, cyclic attachment) or a non-rigid strip or disk.
TrajectoryLedger trajectory_ledger(const BrokenTrajectoryConfig& b);

struct TrajectoryVerdict {
  ValidationReport hypotheses;
  TrajectoryLedger ledger;
  /// lhs == 1 - k - l.
  bool global_constraint_holds = false;
  /// lhs + k + l under the global constraint.
  std::optional<long> forced_M;
  bool unbroken = false;  // K == 1 and no attached disks

  bool has_verdict() const { return hypotheses.ok(); }
};

/// Hypotheses: external leaves are dp+ with positive action, strips and disks
/// are rigid, disks are nonconstant. The global constraint is always imposed.
TrajectoryVerdict degeneration_verdict_traj(const BrokenTrajectoryConfig& b);

// ---------------------------------------------------------------------------
// Exhaustive search
// ---------------------------------------------------------------------------

struct TreeSearchBounds {
  int max_disks = 4;
  int max_inputs_per_disk = 3;
  int min_degree = -3;
  int max_degree = 4;
};

struct TrajectorySearchBounds {
  int max_strips = 3;
  int max_attached_disks = 2;
  int max_marked_per_strip = 2;
  int max_marked_total = 2;
  int max_inputs_per_disk = 3;
  int min_degree = -3;
  int max_degree = 4;
};

struct SearchLimits {
  /// Refuse (BoundExceeded) when the estimate is above this.
  std::uint64_t max_configurations = 4'000'000'000ull;
  unsigned workers = 1;
  /// Stored counterexample descriptions; the count is always exact.
  std::size_t max_reported = 16;
};

struct CounterexampleReport {
  std::string family;  // "trees" or "trajectories"
  std::uint64_t estimate = 0;
  std::uint64_t shapes = 0;
  std::uint64_t enumerated = 0;
  /// Enumerated configurations by component count (m for trees, M for
  /// trajectories).
  std::map<long, std::uint64_t> by_components;
  /// Configurations meeting the global degree constraint.
  std::uint64_t global_constraint_hits = 0;
  std::uint64_t telescoping_failures = 0;
  std::uint64_t counterexample_count = 0;
  std::vector<std::string> counterexamples;

  bool ok() const { return counterexample_count == 0 && telescoping_failures == 0 && enumerated == estimate; }
};

/// Exact number of configurations within the bounds, by a degree-distribution
/// convolution over shapes. Throws BoundExceeded when the shape list itself
/// would be unreasonably large.
std::uint64_t estimate_tree_configurations(const TreeSearchBounds& bounds);
std::uint64_t estimate_trajectory_configurations(const TrajectorySearchBounds& bounds);

/// Called with the estimate before any configuration is enumerated.
using EstimateCallback = std::function<void(std::uint64_t)>;

/// Enumerates every rigid, well-matched configuration within the bounds.
///
/// Action model: every external leaf is a dp+ generator of action 1 and every
/// disk has energy 1, so the positivity and nonconstancy hypotheses hold and
/// the degree arithmetic is what is under test. A counterexample is a
/// configuration meeting the global constraint with m >= 2 (M >= 2).
///
/// When `materialize` is set, each configuration is also built as a full
/// config object and handed to it (slow; meant for small bounds).
CounterexampleReport exhaustive_search_trees(const TreeSearchBounds& bounds, const SearchLimits& limits = {},
                                             const EstimateCallback& on_estimate = {},
                                             const std::function<void(const PearlyTreeConfig&)>& materialize = {});
CounterexampleReport exhaustive_search_trajectories(
    const TrajectorySearchBounds& bounds, const SearchLimits& limits = {}, const EstimateCallback& on_estimate = {},
    const std::function<void(const BrokenTrajectoryConfig&)>& materialize = {});

}  // namespace cealg
