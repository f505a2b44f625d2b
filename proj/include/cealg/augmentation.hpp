#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cealg/dga.hpp"

namespace cealg {

/// Unital algebra map to the ground field, given by its values on generators.
/// Unlisted generators map to 0; zero values are never stored.
class Augmentation {
 public:
  explicit Augmentation(Field field = Field(2)) : field_(field) {}

  Field field() const { return field_; }
  Scalar value(const std::string& name) const;
  void set(const std::string& name, Scalar v);
  /// Nonzero values only, ordered by generator name.
  const std::map<std::string, Scalar>& values() const { return values_; }

  friend bool operator==(const Augmentation&, const Augmentation&) = default;

 private:
  Field field_;
  std::map<std::string, Scalar> values_;
};

/// Sum over terms of coeff * product of letter values; the unit word gives 1.
Scalar evaluate(const Augmentation& e, const NcPoly& q);

/// Empty report iff e is an augmentation of dga: e vanishes off degree 0
/// (check "augmentation-degree"), names only declared generators
/// ("augmentation-undeclared"), and e(d g) = 0 for every generator g
/// ("augmentation").
ValidationReport check_augmentation(const Dga& dga, const Augmentation& e);

struct EnumerationOptions {
  /// Refuse when the number of degree-0 generators exceeds this; by default
  /// 24 over F_2, scaled to the same search-space size for larger p.
  std::optional<std::size_t> max_variables;
  /// When false only the count is produced.
  bool collect = true;
  /// Stop collecting (but keep counting) after this many; 0 = no limit.
  std::size_t collect_limit = 0;
  /// Workers for prefix-partitioned search; results do not depend on it.
  unsigned workers = 1;
};

struct EnumerationResult {
  std::vector<std::string> variables;  // degree-0 generators, sorted by name
  std::vector<Augmentation> augmentations;
  std::uint64_t count = 0;
  bool truncated = false;
};

std::size_t default_max_variables(Field field);

/// All augmentations, in lexicographic order of their value tuples over the
/// name-sorted degree-0 generators. Depth-first with early rejection: each
/// constraint e(d g) = 0 is evaluated as soon as its last variable is fixed.
/// Throws BoundExceeded if there are too many degree-0 generators.
EnumerationResult enumerate_augmentations(const Dga& dga, const EnumerationOptions& options = {});

}  // namespace cealg
