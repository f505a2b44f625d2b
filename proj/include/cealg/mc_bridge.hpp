#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "cealg/augmentation.hpp"
#include "cealg/dga.hpp"

namespace cealg {

/// Why an entry was dropped at load.
struct Rejection {
  std::size_t entry = 0;  // position in the input entry list
  std::string reason;
};

// ---------------------------------------------------------------------------
// Disk counts
// ---------------------------------------------------------------------------

/// One rigid-disk count #M(output; inputs...). Inputs are in boundary order
/// as they appear in the CE differential, left to right.
struct DiskEntry {
  std::string output;
  std::vector<std::string> inputs;
  Scalar count;
};

/// Counts of rigid disks with corners at positive double points.
///
/// Admissibility is enforced at load: every stored entry satisfies the
/// rigidity identity |out| - sum |in| = 2 - #in, and every nonzero count
/// satisfies the energy inequality a(out) > sum a(in). Entries with the same
/// key are summed; zero totals are not stored.
class DiskCountTable {
 public:
  using Key = std::pair<std::string, std::vector<std::string>>;

  struct LoadResult;

  /// Throws DgaError unless every double point is a declared, uniquely named
  /// positive double point (kind dp+, action > 0). Entry-level problems
  /// (undeclared names, degree or energy filter) become rejections.
  static LoadResult load(Field field, std::vector<Generator> double_points, const std::vector<DiskEntry>& entries);

  Field field() const { return field_; }
  const std::vector<Generator>& double_points() const { return double_points_; }
  const Generator* find(const std::string& name) const;
  const std::map<Key, Scalar>& counts() const { return counts_; }

 private:
  DiskCountTable(Field field, std::vector<Generator> dps) : field_(field), double_points_(std::move(dps)) {}

  Field field_;
  std::vector<Generator> double_points_;
  std::map<Key, Scalar> counts_;
};

struct DiskCountTable::LoadResult {
  DiskCountTable table;
  std::vector<Rejection> rejected;
};

/// b = sum lambda_x x_+, supported on degree-1 positive double points.
class BoundingCochain {
 public:
  explicit BoundingCochain(Field field = Field(2)) : field_(field) {}

  Field field() const { return field_; }
  Scalar coefficient(const std::string& name) const;
  void set(const std::string& name, Scalar lambda);
  /// Nonzero coefficients only.
  const std::map<std::string, Scalar>& coefficients() const { return coefficients_; }

  friend bool operator==(const BoundingCochain&, const BoundingCochain&) = default;

 private:
  Field field_;
  std::map<std::string, Scalar> coefficients_;
};

/// Throws SupportError unless b is nonzero only on degree-1 double points in
/// `double_points`.
void require_cochain_support(const BoundingCochain& b, const std::vector<Generator>& double_points,
                             const std::string& what = "bounding cochain");

/// The Chekanov-Eliashberg algebra of the Legendrian lift: one Reeb-chord
/// generator per double point, with the same name, degree 1 - |x_+|, action
/// a(x_+), and d(y) = sum over entries (y; x_1..x_d) of count * x_1 ... x_d.
/// The differential has degree +1.
Dga derive_ce(const DiskCountTable& table);

/// Maurer-Cartan series at every degree-2 output present in the table:
///   #M(y) + sum lambda_x1 #M(y; x1) + sum lambda_x1 lambda_x2 #M(y; x1, x2) + ...
/// b solves Maurer-Cartan iff every value is zero. Throws SupportError.
std::map<std::string, Scalar> mc_residual(const DiskCountTable& table, const BoundingCochain& b);

/// e_b(x) = lambda_x, transcribed across x_+ <-> x.
Augmentation eps_from_b(const BoundingCochain& b);

/// b_e = sum e(x) x_+. Throws SupportError if e is nonzero on a generator
/// that is not a degree-0 chord of derive_ce(table).
BoundingCochain b_from_eps(const DiskCountTable& table, const Augmentation& e);

/// Checks mc_residual(T, b)(y) == evaluate(eps_from_b(b), d(y)) for every
/// double point y of the table (residual 0 where none is reported), the two
/// sides being computed by independent routes.
bool verify_prop_bc_aug(const DiskCountTable& table, const BoundingCochain& b);

// ---------------------------------------------------------------------------
// Strip counts
// ---------------------------------------------------------------------------

/// #M(c_out; bottom..., c_in, top...) for a rigid strip with boundary
/// punctures at double points of L0 (bottom) and L1 (top).
struct StripEntry {
  std::string out;
  std::string in;
  std::vector<std::string> bottom;
  std::vector<std::string> top;
  Scalar count;
};

/// Rigid-strip counts for CW*(L0, L1). The degree filter
///   |c_out| - |c_in| - sum |marked| = 1 - #marked
/// is enforced at load.
class StripCountTable {
 public:
  using Key = std::tuple<std::string, std::string, std::vector<std::string>, std::vector<std::string>>;

  struct LoadResult;

  /// Chords must be uniquely named mixed chords; double points dp+ with
  /// positive action. A name may not be both a chord and a double point.
  static LoadResult load(Field field, std::vector<Generator> chords, std::vector<Generator> dp_l0,
                         std::vector<Generator> dp_l1, const std::vector<StripEntry>& entries);

  Field field() const { return field_; }
  const std::vector<Generator>& chords() const { return chords_; }
  const std::vector<Generator>& dp_l0() const { return dp_l0_; }
  const std::vector<Generator>& dp_l1() const { return dp_l1_; }
  const std::map<Key, Scalar>& counts() const { return counts_; }

 private:
  StripCountTable(Field f, std::vector<Generator> c, std::vector<Generator> d0, std::vector<Generator> d1)
      : field_(f), chords_(std::move(c)), dp_l0_(std::move(d0)), dp_l1_(std::move(d1)) {}

  Field field_;
  std::vector<Generator> chords_;
  std::vector<Generator> dp_l0_;
  std::vector<Generator> dp_l1_;
  std::map<Key, Scalar> counts_;
};

struct StripCountTable::LoadResult {
  StripCountTable table;
  std::vector<Rejection> rejected;
};

/// Square matrix over the chord basis; entry (row, col) is the coefficient
/// of basis[row] in the image of basis[col].
class ChordMatrix {
 public:
  ChordMatrix(Field field, std::vector<std::string> basis);

  Field field() const { return field_; }
  const std::vector<std::string>& basis() const { return basis_; }
  std::size_t size() const { return basis_.size(); }
  Scalar at(std::size_t row, std::size_t col) const { return entries_[row * basis_.size() + col]; }
  Scalar& at(std::size_t row, std::size_t col) { return entries_[row * basis_.size() + col]; }
  std::size_t index_of(const std::string& name) const;
  bool is_zero() const;

  friend ChordMatrix operator*(const ChordMatrix& a, const ChordMatrix& b);
  friend bool operator==(const ChordMatrix&, const ChordMatrix&) = default;

 private:
  Field field_;
  std::vector<std::string> basis_;
  std::vector<Scalar> entries_;
};

/// m1 on CW*((L0,b0),(L1,b1)) with pearly decorations collapsed to weighted
/// punctures: entry (c_out, c_in) = sum of count * prod lambda0(bottom) *
/// prod lambda1(top). Throws SupportError.
ChordMatrix deformed_differential(const StripCountTable& table, const BoundingCochain& b0, const BoundingCochain& b1);

/// The same operator written with augmentation weights, each boundary word
/// evaluated as a CE monomial: entry = sum count * e0(bottom word) * e1(top word).
ChordMatrix augmented_differential(const StripCountTable& table, const Augmentation& e0, const Augmentation& e1);

/// Reports every nonzero entry of m1 o m1 (check "m1-squared").
ValidationReport check_squared_zero(const StripCountTable& table, const BoundingCochain& b0, const BoundingCochain& b1);

}  // namespace cealg
