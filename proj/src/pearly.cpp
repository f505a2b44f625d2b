#include "cealg/pearly.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <limits>
#include <thread>
#include <tuple>

#include "cealg/error.hpp"

namespace cealg {

Rational DiskComponent::energy() const {
  Rational e = output.action;
  for (const auto& g : inputs) e -= g.action;
  return e;
}

bool DiskComponent::rigid() const {
  long d = output.degree;
  for (const auto& g : inputs) d -= g.degree;
  return d == 2 - static_cast<long>(inputs.size());
}

Rational disk_energy(const DiskComponent& d) { return d.energy(); }

bool StripComponent::rigid() const {
  long d = static_cast<long>(out.degree) - in.degree;
  for (const auto& g : bottom) d -= g.degree;
  for (const auto& g : top) d -= g.degree;
  return d == 1 - static_cast<long>(bottom.size() + top.size());
}

namespace {

// ---------------------------------------------------------------------------
// Incidence analysis shared by trees and trajectories
// ---------------------------------------------------------------------------

struct DiskForest {
  /// children[d][s]: the disk plugged into slot s of disk d.
  std::vector<std::vector<std::optional<std::size_t>>> children;
  /// Disks whose parent is not another disk.
  std::vector<std::size_t> roots;
  /// Every disk, children before parents.
  std::vector<std::size_t> postorder;
};

/// Checks the disk-to-disk part of the incidence. `slot_parent(i)` is the
/// parent slot of disk i when that parent is another disk.
template <typename SlotParent>
std::vector<std::string> analyse_forest(const std::vector<DiskComponent>& disks, SlotParent slot_parent,
                                        DiskForest& forest) {
  std::vector<std::string> errors;
  const std::size_t n = disks.size();
  forest.children.assign(n, {});
  for (std::size_t d = 0; d < n; ++d) forest.children[d].assign(disks[d].inputs.size(), std::nullopt);

  for (std::size_t d = 0; d < n; ++d) {
    const std::optional<SlotRef> p = slot_parent(d);
    if (!p) {
      forest.roots.push_back(d);
      continue;
    }
    const std::string who = "disk " + std::to_string(d);
    if (p->disk >= n) {
      errors.push_back(who + " attaches to missing disk " + std::to_string(p->disk));
      continue;
    }
    if (p->slot >= disks[p->disk].inputs.size()) {
      errors.push_back(who + " attaches to missing slot " + std::to_string(p->slot) + " of disk " +
                       std::to_string(p->disk));
      continue;
    }
    auto& cell = forest.children[p->disk][p->slot];
    if (cell) {
      errors.push_back("slot " + std::to_string(p->slot) + " of disk " + std::to_string(p->disk) +
                       " receives both disk " + std::to_string(*cell) + " and disk " + std::to_string(d));
      continue;
    }
    cell = d;
    if (!(disks[p->disk].inputs[p->slot] == disks[d].output))
      errors.push_back("edge from " + who + " joins output " + disks[d].output.name + " to input " +
                       disks[p->disk].inputs[p->slot].name + " of disk " + std::to_string(p->disk));
  }

  // Every disk reachable from a root exactly once, else there is a cycle.
  std::vector<bool> seen(n, false);
  std::vector<std::pair<std::size_t, std::size_t>> stack;
  for (std::size_t r : forest.roots) {
    stack.push_back({r, 0});
    seen[r] = true;
    while (!stack.empty()) {
      auto& [d, next] = stack.back();
      if (next == forest.children[d].size()) {
        forest.postorder.push_back(d);
        stack.pop_back();
        continue;
      }
      const auto c = forest.children[d][next++];
      if (c && !seen[*c]) {
        seen[*c] = true;
        stack.push_back({*c, 0});
      }
    }
  }
  for (std::size_t d = 0; d < n; ++d)
    if (!seen[d]) {
      errors.push_back("disk " + std::to_string(d) + " lies on a cycle of attachments");
      break;
    }
  return errors;
}

std::string join_errors(const std::vector<std::string>& errors) {
  std::string out;
  for (const auto& e : errors) out += (out.empty() ? "" : "; ") + e;
  return out;
}

struct TreeAnalysis {
  DiskForest forest;
  std::vector<std::string> errors;
  std::vector<Generator> externals;
};

TreeAnalysis analyse_tree(const PearlyTreeConfig& t) {
  TreeAnalysis a;
  if (t.parent.size() != t.disks.size()) {
    a.errors.push_back("parent list has " + std::to_string(t.parent.size()) + " entries for " +
                       std::to_string(t.disks.size()) + " disks");
    return a;
  }
  if (t.disks.empty()) {
    if (!t.bare) a.errors.push_back("a configuration without disks needs a bare edge generator");
    else a.externals.push_back(*t.bare);
    return a;
  }
  a.errors = analyse_forest(t.disks, [&](std::size_t d) { return t.parent[d]; }, a.forest);
  if (t.bare) a.errors.push_back("a bare edge generator is only meaningful without disks");
  if (a.forest.roots.size() != 1)
    a.errors.push_back("expected exactly one root disk, found " + std::to_string(a.forest.roots.size()));
  for (std::size_t d = 0; d < t.disks.size(); ++d)
    for (std::size_t s = 0; s < t.disks[d].inputs.size(); ++s)
      if (!a.forest.children[d][s]) a.externals.push_back(t.disks[d].inputs[s]);
  return a;
}

}  // namespace

// ---------------------------------------------------------------------------
// Trees
// ---------------------------------------------------------------------------

TreeLedger tree_ledger(const PearlyTreeConfig& t) {
  auto a = analyse_tree(t);
  for (std::size_t d = 0; d < t.disks.size(); ++d)
    if (!t.disks[d].rigid()) a.errors.push_back("disk " + std::to_string(d) + " is not rigid");
  if (!a.errors.empty()) throw ConfigError("pearly tree: " + join_errors(a.errors));

  TreeLedger ledger;
  ledger.m = t.disks.size();
  ledger.k = a.externals.size();
  const Generator& root = t.disks.empty() ? *t.bare : t.disks[a.forest.roots.front()].output;
  ledger.lhs = root.degree;
  for (const auto& g : a.externals) ledger.lhs -= g.degree;
  ledger.rhs = static_cast<long>(ledger.m) + 1 - static_cast<long>(ledger.k);
  ledger.telescoped = ledger.lhs == ledger.rhs;
  return ledger;
}

TreeVerdict degeneration_verdict_tree(const PearlyTreeConfig& t, bool global_degree_constraint) {
  TreeVerdict v;
  v.global_constraint_imposed = global_degree_constraint;
  const auto a = analyse_tree(t);
  for (const auto& e : a.errors) v.hypotheses.add("structure", "tree", e);
  if (!a.errors.empty()) return v;

  if (t.disks.empty()) v.hypotheses.add("hypothesis-nonconstant", "tree", "a bare gradient edge has no disk component");
  for (const auto& g : a.externals)
    if (g.kind != GeneratorKind::DoublePointPos || g.action <= 0)
      v.hypotheses.add("hypothesis-external", g.name,
                       "external input " + g.name + " must be a dp+ generator of positive action");
  for (std::size_t d = 0; d < t.disks.size(); ++d) {
    const std::string who = "disk " + std::to_string(d);
    if (!t.disks[d].rigid()) v.hypotheses.add("hypothesis-rigid", who, who + " is not rigid");
    if (t.disks[d].energy() <= 0)
      v.hypotheses.add("hypothesis-nonconstant", who, who + " has energy " + to_string(t.disks[d].energy()));
  }
  if (!v.hypotheses.ok()) return v;

  v.ledger = tree_ledger(t);

  // Leaves first: an output is positive once its inputs are positive and its
  // energy is positive; the conclusion is then compared with the data.
  std::vector<bool> positive(t.disks.size(), false);
  v.positivity_propagates = true;
  for (std::size_t d : a.forest.postorder) {
    bool inputs_positive = true;
    for (std::size_t s = 0; s < t.disks[d].inputs.size(); ++s) {
      const auto c = a.forest.children[d][s];
      inputs_positive = inputs_positive && (c ? positive[*c] : t.disks[d].inputs[s].action > 0);
    }
    positive[d] = inputs_positive && t.disks[d].energy() > 0 && t.disks[d].output.action > 0;
    v.positivity_propagates = v.positivity_propagates && positive[d];
  }
  v.output_positive = positive[a.forest.roots.front()];

  if (global_degree_constraint) {
    v.global_constraint_holds = v.ledger.lhs == 2 - static_cast<long>(v.ledger.k);
    if (v.global_constraint_holds) {
      v.forced_m = v.ledger.lhs + static_cast<long>(v.ledger.k) - 1;
      v.single_disk = *v.forced_m == 1 && v.ledger.m == 1;
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// Trajectories
// ---------------------------------------------------------------------------

namespace {

struct TrajectoryAnalysis {
  DiskForest forest;
  std::vector<std::string> errors;
  std::vector<Side> disk_side;
  std::vector<std::pair<Generator, Side>> externals;
};

const std::vector<Generator>& boundary(const StripComponent& s, Side side) {
  return side == Side::Bottom ? s.bottom : s.top;
}

TrajectoryAnalysis analyse_trajectory(const BrokenTrajectoryConfig& b) {
  TrajectoryAnalysis a;
  if (b.strips.empty()) a.errors.push_back("a broken trajectory needs at least one strip");
  if (b.parent.size() != b.disks.size()) {
    a.errors.push_back("parent list has " + std::to_string(b.parent.size()) + " entries for " +
                       std::to_string(b.disks.size()) + " disks");
    return a;
  }
  for (std::size_t v = 0; v + 1 < b.strips.size(); ++v)
    if (!(b.strips[v].out == b.strips[v + 1].in))
      a.errors.push_back("strip " + std::to_string(v) + " ends at " + b.strips[v].out.name + " but strip " +
                         std::to_string(v + 1) + " starts at " + b.strips[v + 1].in.name);

  const auto slot_parent = [&](std::size_t d) -> std::optional<SlotRef> {
    if (const auto* s = std::get_if<SlotRef>(&b.parent[d])) return *s;
    return std::nullopt;
  };
  auto forest_errors = analyse_forest(b.disks, slot_parent, a.forest);
  a.errors.insert(a.errors.end(), forest_errors.begin(), forest_errors.end());

  std::map<std::tuple<std::size_t, Side, std::size_t>, std::size_t> used;
  a.disk_side.assign(b.disks.size(), Side::Bottom);
  for (std::size_t r : a.forest.roots) {
    const auto& m = std::get<MarkedRef>(b.parent[r]);
    const std::string who = "disk " + std::to_string(r);
    if (m.strip >= b.strips.size() || m.slot >= boundary(b.strips[m.strip], m.side).size()) {
      a.errors.push_back(who + " attaches to a missing marked point");
      continue;
    }
    auto [it, inserted] = used.emplace(std::make_tuple(m.strip, m.side, m.slot), r);
    if (!inserted) {
      a.errors.push_back("marked point " + std::to_string(m.slot) + " of strip " + std::to_string(m.strip) +
                         " receives both disk " + std::to_string(it->second) + " and " + who);
      continue;
    }
    if (!(boundary(b.strips[m.strip], m.side)[m.slot] == b.disks[r].output))
      a.errors.push_back(who + " has output " + b.disks[r].output.name + " but its marked point carries " +
                         boundary(b.strips[m.strip], m.side)[m.slot].name);
  }
  if (!a.errors.empty()) return a;

  // Sides propagate from the marked point down the disk tree.
  for (auto it = a.forest.postorder.rbegin(); it != a.forest.postorder.rend(); ++it) {
    const std::size_t d = *it;
    if (const auto* m = std::get_if<MarkedRef>(&b.parent[d])) a.disk_side[d] = m->side;
    else a.disk_side[d] = a.disk_side[std::get<SlotRef>(b.parent[d]).disk];
  }
  for (std::size_t v = 0; v < b.strips.size(); ++v)
    for (Side side : {Side::Bottom, Side::Top}) {
      const auto& pts = boundary(b.strips[v], side);
      for (std::size_t s = 0; s < pts.size(); ++s)
        if (!used.contains({v, side, s})) a.externals.push_back({pts[s], side});
    }
  for (std::size_t d = 0; d < b.disks.size(); ++d)
    for (std::size_t s = 0; s < b.disks[d].inputs.size(); ++s)
      if (!a.forest.children[d][s]) a.externals.push_back({b.disks[d].inputs[s], a.disk_side[d]});
  return a;
}

}  // namespace

TrajectoryLedger trajectory_ledger(const BrokenTrajectoryConfig& b) {
  auto a = analyse_trajectory(b);
  for (std::size_t v = 0; v < b.strips.size(); ++v)
    if (!b.strips[v].rigid()) a.errors.push_back("strip " + std::to_string(v) + " is not rigid");
  for (std::size_t d = 0; d < b.disks.size(); ++d)
    if (!b.disks[d].rigid()) a.errors.push_back("disk " + std::to_string(d) + " is not rigid");
  if (!a.errors.empty()) throw ConfigError("broken trajectory: " + join_errors(a.errors));

  TrajectoryLedger ledger;
  ledger.K = b.strips.size();
  for (Side s : a.disk_side) ++(s == Side::Bottom ? ledger.m0 : ledger.m1);
  ledger.M = ledger.K + ledger.m0 + ledger.m1;
  ledger.lhs = static_cast<long>(b.strips.back().out.degree) - b.strips.front().in.degree;
  for (const auto& [g, side] : a.externals) {
    ++(side == Side::Bottom ? ledger.k : ledger.l);
    ledger.lhs -= g.degree;
  }
  ledger.rhs = static_cast<long>(ledger.M) - static_cast<long>(ledger.k) - static_cast<long>(ledger.l);
  ledger.telescoped = ledger.lhs == ledger.rhs;
  return ledger;
}

TrajectoryVerdict degeneration_verdict_traj(const BrokenTrajectoryConfig& b) {
  TrajectoryVerdict v;
  const auto a = analyse_trajectory(b);
  for (const auto& e : a.errors) v.hypotheses.add("structure", "trajectory", e);
  if (!a.errors.empty()) return v;
  for (const auto& [g, side] : a.externals)
    if (g.kind != GeneratorKind::DoublePointPos || g.action <= 0)
      v.hypotheses.add("hypothesis-external", g.name,
                       "external leaf " + g.name + " must be a dp+ generator of positive action");
  for (std::size_t s = 0; s < b.strips.size(); ++s)
    if (!b.strips[s].rigid())
      v.hypotheses.add("hypothesis-rigid", "strip " + std::to_string(s), "strip " + std::to_string(s) + " is not rigid");
  for (std::size_t d = 0; d < b.disks.size(); ++d) {
    const std::string who = "disk " + std::to_string(d);
    if (!b.disks[d].rigid()) v.hypotheses.add("hypothesis-rigid", who, who + " is not rigid");
    if (b.disks[d].energy() <= 0)
      v.hypotheses.add("hypothesis-nonconstant", who, who + " has energy " + to_string(b.disks[d].energy()));
  }
  if (!v.hypotheses.ok()) return v;

  v.ledger = trajectory_ledger(b);
  v.global_constraint_holds =
      v.ledger.lhs == 1 - static_cast<long>(v.ledger.k) - static_cast<long>(v.ledger.l);
  if (v.global_constraint_holds) {
    v.forced_M = v.ledger.lhs + static_cast<long>(v.ledger.k + v.ledger.l);
    v.unbroken = *v.forced_M == 1 && v.ledger.K == 1 && v.ledger.m0 == 0 && v.ledger.m1 == 0;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Exhaustive search
// ---------------------------------------------------------------------------

namespace {

constexpr std::size_t kMaxShapes = 2'000'000;
constexpr int kStackDepth = 64;

enum class OpKind : std::uint8_t { Ext, First, CloseDisk, CloseStrip };

/// Post-order program for one configuration shape. Ext and First push a free
/// degree (First is the initial chord of a trajectory); a close pops n values
/// and pushes their sum plus `bonus`, subject to the degree range.
struct Op {
  OpKind kind;
  std::int8_t n = 0;
  std::int8_t bonus = 0;
  std::int8_t bottom = 0;  // CloseStrip: how many of the marked values are bottom
  Side side = Side::Bottom;  // Ext inside a trajectory
};

struct Shape {
  std::vector<Op> ops;
  long components = 0;
  long externals = 0;
  long rhs = 0;
  long target = 0;  // the global degree constraint
};

struct Fragment {
  std::vector<Op> ops;
  int disks = 0;
  int bottom_ext = 0;  // only meaningful once sides are assigned
  int top_ext = 0;
};

void check_range(int lo, int hi) {
  if (lo > hi) throw PreconditionError("search degree range is empty");
  if (hi - lo > 64 || lo < -100 || hi > 100) throw BoundExceeded("search degree range is too wide");
}

/// Disk trees with exactly `size` disks, memoised by size.
class DiskTrees {
 public:
  explicit DiskTrees(int max_inputs) : max_inputs_(max_inputs) {}

  const std::vector<Fragment>& exact(int size) {
    while (static_cast<int>(memo_.size()) <= size) memo_.emplace_back();
    if (size >= 1 && memo_[size].empty()) build(size);
    return memo_[size];
  }

 private:
  void build(int size) {
    auto& out = memo_[size];
    for (int n = 0; n <= max_inputs_; ++n) {
      Fragment f;
      slots(n, 0, size - 1, f, out);
    }
  }

  void slots(int n, int i, int remaining, Fragment& acc, std::vector<Fragment>& out) {
    if (i == n) {
      if (remaining != 0) return;
      Fragment done = acc;
      done.disks += 1;
      done.ops.push_back(Op{OpKind::CloseDisk, static_cast<std::int8_t>(n), static_cast<std::int8_t>(2 - n)});
      out.push_back(std::move(done));
      if (out.size() > kMaxShapes) throw BoundExceeded("too many tree shapes within the bounds");
      return;
    }
    Fragment with_ext = acc;
    with_ext.ops.push_back(Op{OpKind::Ext});
    with_ext.bottom_ext += 1;
    slots(n, i + 1, remaining, with_ext, out);
    for (int b = 1; b <= remaining; ++b) {
      const auto subs = exact(b);  // copy: exact() may grow memo_
      for (const auto& sub : subs) {
        Fragment next = acc;
        next.ops.insert(next.ops.end(), sub.ops.begin(), sub.ops.end());
        next.disks += sub.disks;
        next.bottom_ext += sub.bottom_ext;
        slots(n, i + 1, remaining - b, next, out);
      }
    }
  }

  int max_inputs_;
  std::vector<std::vector<Fragment>> memo_;
};

std::vector<Shape> tree_shapes(const TreeSearchBounds& b) {
  if (b.max_disks < 1 || b.max_inputs_per_disk < 0)
    throw PreconditionError("tree search needs max_disks >= 1 and max_inputs_per_disk >= 0");
  check_range(b.min_degree, b.max_degree);
  if (b.max_disks * b.max_inputs_per_disk + 1 > kStackDepth) throw BoundExceeded("tree search bounds too large");
  DiskTrees trees(b.max_inputs_per_disk);
  std::vector<Shape> shapes;
  for (int m = 1; m <= b.max_disks; ++m)
    for (const auto& f : trees.exact(m)) {
      Shape s;
      s.ops = f.ops;
      s.components = m;
      s.externals = f.bottom_ext;
      s.rhs = m + 1 - s.externals;
      s.target = 2 - s.externals;
      shapes.push_back(std::move(s));
      if (shapes.size() > kMaxShapes) throw BoundExceeded("too many tree shapes within the bounds");
    }
  return shapes;
}

std::vector<Shape> trajectory_shapes(const TrajectorySearchBounds& b) {
  if (b.max_strips < 1 || b.max_attached_disks < 0 || b.max_marked_per_strip < 0 || b.max_marked_total < 0 ||
      b.max_inputs_per_disk < 0)
    throw PreconditionError("trajectory search needs max_strips >= 1 and non-negative bounds");
  check_range(b.min_degree, b.max_degree);
  const int marked = std::min(b.max_marked_total, b.max_strips * b.max_marked_per_strip);
  if (1 + marked + b.max_attached_disks * b.max_inputs_per_disk + b.max_strips > kStackDepth)
    throw BoundExceeded("trajectory search bounds too large");

  DiskTrees trees(b.max_inputs_per_disk);
  std::vector<Shape> shapes;

  struct Partial {
    std::vector<Op> ops;
    int strips = 0, marked = 0, m0 = 0, m1 = 0, k = 0, l = 0;
  };
  const auto emit = [&](const Partial& p) {
    Shape s;
    s.ops = p.ops;
    s.components = p.strips + p.m0 + p.m1;
    s.externals = p.k + p.l;
    s.rhs = s.components - s.externals;
    s.target = 1 - s.externals;
    shapes.push_back(std::move(s));
    if (shapes.size() > kMaxShapes) throw BoundExceeded("too many trajectory shapes within the bounds");
  };

  // Fill marked point `i` of the current strip (kappa total, first `nb` bottom).
  std::function<void(Partial, int, int, int)> fill_marked;
  std::function<void(Partial)> next_strip;
  fill_marked = [&](Partial p, int kappa, int nb, int i) {
    if (i == kappa) {
      p.ops.push_back(Op{OpKind::CloseStrip, static_cast<std::int8_t>(kappa + 1), static_cast<std::int8_t>(1 - kappa),
                         static_cast<std::int8_t>(nb)});
      p.strips += 1;
      p.marked += kappa;
      emit(p);
      if (p.strips < b.max_strips) next_strip(p);
      return;
    }
    const Side side = i < nb ? Side::Bottom : Side::Top;
    Partial ext = p;
    ext.ops.push_back(Op{OpKind::Ext, 0, 0, 0, side});
    ++(side == Side::Bottom ? ext.k : ext.l);
    fill_marked(ext, kappa, nb, i + 1);
    const int used = p.m0 + p.m1;
    for (int size = 1; used + size <= b.max_attached_disks; ++size) {
      const auto subs = trees.exact(size);
      for (const auto& sub : subs) {
        Partial q = p;
        for (Op op : sub.ops) {
          op.side = side;
          q.ops.push_back(op);
        }
        (side == Side::Bottom ? q.k : q.l) += sub.bottom_ext;
        (side == Side::Bottom ? q.m0 : q.m1) += size;
        fill_marked(q, kappa, nb, i + 1);
      }
    }
  };
  next_strip = [&](Partial p) {
    const int room = std::min(b.max_marked_per_strip, b.max_marked_total - p.marked);
    for (int kappa = 0; kappa <= room; ++kappa)
      for (int nb = 0; nb <= kappa; ++nb) fill_marked(p, kappa, nb, 0);
  };

  Partial start;
  start.ops.push_back(Op{OpKind::First});
  next_strip(start);
  return shapes;
}

// -- estimate ---------------------------------------------------------------

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > std::numeric_limits<std::uint64_t>::max() / b ? std::numeric_limits<std::uint64_t>::max() : a * b;
}

/// Number of degree assignments of a shape: each value on the stack is
/// replaced by its distribution over the degree range.
std::uint64_t count_assignments(const Shape& s, int lo, int hi) {
  using Dist = std::map<long, std::uint64_t>;
  std::vector<Dist> stack;
  for (const Op& op : s.ops) {
    if (op.kind == OpKind::Ext || op.kind == OpKind::First) {
      Dist d;
      for (int g = lo; g <= hi; ++g) d[g] = 1;
      stack.push_back(std::move(d));
      continue;
    }
    Dist sum{{0, 1}};
    for (int t = 0; t < op.n; ++t) {
      Dist next;
      for (const auto& [a, ca] : sum)
        for (const auto& [g, cg] : stack.back()) next[a + g] = sat_add(next[a + g], sat_mul(ca, cg));
      sum = std::move(next);
      stack.pop_back();
    }
    Dist out;
    for (const auto& [a, c] : sum)
      if (a + op.bonus >= lo && a + op.bonus <= hi) out[a + op.bonus] = c;
    stack.push_back(std::move(out));
  }
  std::uint64_t total = 0;
  for (const auto& [g, c] : stack.back()) total = sat_add(total, c);
  return total;
}

std::uint64_t estimate(const std::vector<Shape>& shapes, int lo, int hi) {
  std::uint64_t total = 0;
  for (const auto& s : shapes) total = sat_add(total, count_assignments(s, lo, hi));
  return total;
}

// -- enumeration ------------------------------------------------------------

struct ShapeTally {
  std::uint64_t enumerated = 0;
  std::uint64_t global_hits = 0;
  std::uint64_t telescoping_failures = 0;
  std::uint64_t counterexamples = 0;
  std::vector<std::string> described;
};

using Choices = std::array<int, 256>;
using LeafHook = std::function<void(const Shape&, const Choices&)>;

std::string describe(const Shape& s, const Choices& choices) {
  std::vector<std::string> stack;
  std::string first;
  for (std::size_t pc = 0; pc < s.ops.size(); ++pc) {
    const Op& op = s.ops[pc];
    switch (op.kind) {
      case OpKind::Ext: stack.push_back(std::to_string(choices[pc])); break;
      case OpKind::First: stack.push_back(std::to_string(choices[pc])); break;
      case OpKind::CloseDisk:
      case OpKind::CloseStrip: {
        std::vector<std::string> parts(stack.end() - op.n, stack.end());
        stack.resize(stack.size() - static_cast<std::size_t>(op.n));
        std::string text = op.kind == OpKind::CloseDisk ? "disk(" : "strip(";
        for (std::size_t i = 0; i < parts.size(); ++i) text += (i ? "," : "") + parts[i];
        stack.push_back(text + ")");
        break;
      }
    }
  }
  return stack.empty() ? "" : stack.back();
}

class Machine {
 public:
  Machine(const Shape& s, int lo, int hi, std::size_t max_reported, const LeafHook* hook)
      : s_(s), lo_(lo), hi_(hi), max_reported_(max_reported), hook_(hook), saved_(s.ops.size() * kStackDepth) {
    tail_start_ = s_.ops.size();
    for (std::size_t pc = s_.ops.size(); pc-- > 0;)
      if (s_.ops[pc].kind == OpKind::Ext || s_.ops[pc].kind == OpKind::First) {
        tail_start_ = pc;
        break;
      }
    // A zero-input close in the tail would push a value that does not
    // contain the free one; leave such shapes to the general recursion.
    for (std::size_t pc = tail_start_ + 1; pc < s_.ops.size(); ++pc)
      if (s_.ops[pc].n == 0) tail_start_ = s_.ops.size();
    if (tail_start_ + 1 >= s_.ops.size()) tail_start_ = s_.ops.size();
  }

  ShapeTally run() {
    if (s_.ops.size() > choices_.size()) throw BoundExceeded("configuration shape too long");
    step(0, 0, 0, 0);
    return std::move(tally_);
  }

 private:
  void leaf(long lhs) {
    ++tally_.enumerated;
    if (lhs != s_.rhs) ++tally_.telescoping_failures;
    if (lhs == s_.target) {
      ++tally_.global_hits;
      if (s_.components >= 2) {
        ++tally_.counterexamples;
        if (tally_.described.size() < max_reported_) tally_.described.push_back(describe(s_, choices_));
      }
    }
    if (hook_) (*hook_)(s_, choices_);
  }

  /// The last free value is followed only by closes, each of which pops the
  /// value pushed just before it. Those closes are evaluated in a flat loop.
  void last_free(std::size_t pc, int sp, long extsum, int first) {
    std::array<int, 256> rest{};
    int depth = sp + 1;
    for (std::size_t j = pc + 1; j < s_.ops.size(); ++j) {
      const Op& c = s_.ops[j];
      int r = c.bonus;
      for (int t = depth - c.n; t < depth - 1; ++t) r += stack_[t];
      rest[j] = r;
      depth -= c.n - 1;
    }
    const bool is_first = s_.ops[pc].kind == OpKind::First;
    for (int g = lo_; g <= hi_; ++g) {
      int v = g;
      bool inside = true;
      for (std::size_t j = pc + 1; j < s_.ops.size() && inside; ++j) {
        v += rest[j];
        inside = v >= lo_ && v <= hi_;
      }
      if (!inside) continue;
      choices_[pc] = g;
      leaf(v - (is_first ? g : first) - (is_first ? extsum : extsum + g));
    }
  }

  void step(std::size_t pc, int sp, long extsum, int first) {
    if (pc == s_.ops.size()) {
      leaf(stack_[0] - first - extsum);
      return;
    }
    const Op& op = s_.ops[pc];
    if (pc == tail_start_) {
      last_free(pc, sp, extsum, first);
      return;
    }
    switch (op.kind) {
      case OpKind::Ext:
        for (int g = lo_; g <= hi_; ++g) {
          stack_[sp] = g;
          choices_[pc] = g;
          step(pc + 1, sp + 1, extsum + g, first);
        }
        return;
      case OpKind::First:
        for (int g = lo_; g <= hi_; ++g) {
          stack_[sp] = g;
          choices_[pc] = g;
          step(pc + 1, sp + 1, extsum, g);
        }
        return;
      case OpKind::CloseDisk:
      case OpKind::CloseStrip: {
        const int base = sp - op.n;
        int sum = op.bonus;
        for (int t = base; t < sp; ++t) sum += stack_[t];
        if (sum < lo_ || sum > hi_) return;
        // The popped values sit below later pushes; keep them for backtracking.
        int* saved = &saved_[pc * kStackDepth];
        std::copy(stack_.begin() + base, stack_.begin() + sp, saved);
        stack_[base] = sum;
        step(pc + 1, base + 1, extsum, first);
        std::copy(saved, saved + op.n, stack_.begin() + base);
        return;
      }
    }
  }

  const Shape& s_;
  int lo_, hi_;
  std::size_t max_reported_;
  const LeafHook* hook_;
  std::array<int, kStackDepth> stack_{};
  Choices choices_{};
  std::vector<int> saved_;
  std::size_t tail_start_ = 0;
  ShapeTally tally_;
};

CounterexampleReport run_search(std::string family, const std::vector<Shape>& shapes, int lo, int hi,
                                const SearchLimits& limits, const EstimateCallback& on_estimate, const LeafHook* hook) {
  CounterexampleReport report;
  report.family = std::move(family);
  report.shapes = shapes.size();
  report.estimate = estimate(shapes, lo, hi);
  if (on_estimate) on_estimate(report.estimate);
  if (report.estimate > limits.max_configurations)
    throw BoundExceeded("search would enumerate " + std::to_string(report.estimate) +
                        " configurations, above the limit of " + std::to_string(limits.max_configurations));

  std::vector<ShapeTally> tallies(shapes.size());
  const unsigned workers = hook ? 1u : std::max(1u, limits.workers);
  if (workers == 1) {
    for (std::size_t i = 0; i < shapes.size(); ++i)
      tallies[i] = Machine(shapes[i], lo, hi, limits.max_reported, hook).run();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < shapes.size(); i += workers)
          tallies[i] = Machine(shapes[i], lo, hi, limits.max_reported, nullptr).run();
      });
  }

  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const auto& t = tallies[i];
    report.enumerated += t.enumerated;
    if (t.enumerated) report.by_components[shapes[i].components] += t.enumerated;
    report.global_constraint_hits += t.global_hits;
    report.telescoping_failures += t.telescoping_failures;
    report.counterexample_count += t.counterexamples;
    for (const auto& d : t.described)
      if (report.counterexamples.size() < limits.max_reported) report.counterexamples.push_back(d);
  }
  return report;
}

// -- materialization ----------------------------------------------------------

Generator leaf_generator(int& counter, int degree) {
  return Generator{"g" + std::to_string(++counter), degree, Rational(1), GeneratorKind::DoublePointPos};
}

struct Item {
  Generator gen;
  std::optional<std::size_t> disk;
};

PearlyTreeConfig materialize_tree(const Shape& s, const Choices& choices) {
  PearlyTreeConfig t;
  std::vector<Item> stack;
  int counter = 0;
  for (std::size_t pc = 0; pc < s.ops.size(); ++pc) {
    const Op& op = s.ops[pc];
    if (op.kind == OpKind::Ext) {
      stack.push_back({leaf_generator(counter, choices[pc]), std::nullopt});
      continue;
    }
    DiskComponent disk;
    const std::size_t index = t.disks.size();
    const std::size_t base = stack.size() - static_cast<std::size_t>(op.n);
    int degree = op.bonus;
    Rational action = 1;
    for (std::size_t slot = 0; slot < static_cast<std::size_t>(op.n); ++slot) {
      const Item& item = stack[base + slot];
      disk.inputs.push_back(item.gen);
      degree += item.gen.degree;
      action += item.gen.action;
      if (item.disk) t.parent[*item.disk] = SlotRef{index, slot};
    }
    disk.output = Generator{"g" + std::to_string(++counter), degree, action, GeneratorKind::DoublePointPos};
    stack.resize(base);
    stack.push_back({disk.output, index});
    t.disks.push_back(std::move(disk));
    t.parent.push_back(std::nullopt);
  }
  return t;
}

BrokenTrajectoryConfig materialize_trajectory(const Shape& s, const Choices& choices) {
  BrokenTrajectoryConfig b;
  std::vector<Item> stack;
  int counter = 0;
  for (std::size_t pc = 0; pc < s.ops.size(); ++pc) {
    const Op& op = s.ops[pc];
    switch (op.kind) {
      case OpKind::Ext: stack.push_back({leaf_generator(counter, choices[pc]), std::nullopt}); break;
      case OpKind::First:
        stack.push_back(
            {Generator{"c" + std::to_string(++counter), choices[pc], Rational(0), GeneratorKind::MixedChord}, std::nullopt});
        break;
      case OpKind::CloseDisk: {
        DiskComponent disk;
        const std::size_t index = b.disks.size();
        const std::size_t base = stack.size() - static_cast<std::size_t>(op.n);
        int degree = op.bonus;
        Rational action = 1;
        for (std::size_t slot = 0; slot < static_cast<std::size_t>(op.n); ++slot) {
          const Item& item = stack[base + slot];
          disk.inputs.push_back(item.gen);
          degree += item.gen.degree;
          action += item.gen.action;
          if (item.disk) b.parent[*item.disk] = SlotRef{index, slot};
        }
        disk.output = Generator{"g" + std::to_string(++counter), degree, action, GeneratorKind::DoublePointPos};
        stack.resize(base);
        stack.push_back({disk.output, index});
        b.disks.push_back(std::move(disk));
        b.parent.push_back(MarkedRef{});
        break;
      }
      case OpKind::CloseStrip: {
        StripComponent strip;
        const std::size_t index = b.strips.size();
        const std::size_t base = stack.size() - static_cast<std::size_t>(op.n);
        strip.in = stack[base].gen;
        int degree = op.bonus + strip.in.degree;
        for (std::size_t i = 1; i < static_cast<std::size_t>(op.n); ++i) {
          const Item& item = stack[base + i];
          const bool bottom = static_cast<int>(i - 1) < op.bottom;
          auto& side = bottom ? strip.bottom : strip.top;
          if (item.disk) b.parent[*item.disk] = MarkedRef{index, bottom ? Side::Bottom : Side::Top, side.size()};
          side.push_back(item.gen);
          degree += item.gen.degree;
        }
        strip.out = Generator{"c" + std::to_string(++counter), degree, Rational(0), GeneratorKind::MixedChord};
        stack.resize(base);
        stack.push_back({strip.out, std::nullopt});
        b.strips.push_back(std::move(strip));
        break;
      }
    }
  }
  return b;
}

}  // namespace

std::uint64_t estimate_tree_configurations(const TreeSearchBounds& bounds) {
  return estimate(tree_shapes(bounds), bounds.min_degree, bounds.max_degree);
}

std::uint64_t estimate_trajectory_configurations(const TrajectorySearchBounds& bounds) {
  return estimate(trajectory_shapes(bounds), bounds.min_degree, bounds.max_degree);
}

CounterexampleReport exhaustive_search_trees(const TreeSearchBounds& bounds, const SearchLimits& limits,
                                             const EstimateCallback& on_estimate,
                                             const std::function<void(const PearlyTreeConfig&)>& materialize) {
  const auto shapes = tree_shapes(bounds);
  LeafHook hook;
  if (materialize) hook = [&](const Shape& s, const Choices& c) { materialize(materialize_tree(s, c)); };
  return run_search("trees", shapes, bounds.min_degree, bounds.max_degree, limits, on_estimate,
                    materialize ? &hook : nullptr);
}

CounterexampleReport exhaustive_search_trajectories(const TrajectorySearchBounds& bounds, const SearchLimits& limits,
                                                    const EstimateCallback& on_estimate,
                                                    const std::function<void(const BrokenTrajectoryConfig&)>& materialize) {
  const auto shapes = trajectory_shapes(bounds);
  LeafHook hook;
  if (materialize) hook = [&](const Shape& s, const Choices& c) { materialize(materialize_trajectory(s, c)); };
  return run_search("trajectories", shapes, bounds.min_degree, bounds.max_degree, limits, on_estimate,
                    materialize ? &hook : nullptr);
}

}  // namespace cealg
