#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cealg/augmentation.hpp"
#include "cealg/dga.hpp"
#include "cealg/error.hpp"

namespace cealg {

// ---------------------------------------------------------------------------
// Order-reversing quotient
// ---------------------------------------------------------------------------

struct OrderReversingMarking {
  std::set<std::string> marked;
};

/// The two-sided ideal generated by the marked chords is not closed under d:
/// d(generator) has a monomial (the witness) free of marked letters.
class QuotientError : public Error {
 public:
  QuotientError(std::string generator, Word witness);
  const std::string& generator() const { return generator_; }
  const Word& witness() const { return witness_; }

 private:
  std::string generator_;
  Word witness_;
};

/// DGA on the unmarked generators, with every monomial that contains a marked
/// letter deleted. Throws QuotientError when the ideal is not d-closed and
/// DgaError when a marked name is undeclared.
Dga quotient_order_reversing(const Dga& dga, const OrderReversingMarking& marking);

// ---------------------------------------------------------------------------
// Surgery algebra
// ---------------------------------------------------------------------------

/// Chords of the perturbed union: a_i (cocore to L, tiny action), b^m_ij
/// (cocore i to L), c^m_ij (cocore i to cocore j), and the base chords of L.
enum class ChordRole { Base, A, B, C };

struct SurgeryLabel {
  ChordRole role = ChordRole::Base;
  int i = 0;
  int j = 0;
  int m = 0;

  friend bool operator==(const SurgeryLabel&, const SurgeryLabel&) = default;
};

/// The quotient algebra with its role labels, and optionally the pre-quotient
/// algebra together with the order-reversing chords that were quotiented out.
/// Unlabelled generators are base chords; the base chords span CE(L+).
class SurgeryAlgebra {
 public:
  /// Throws DgaError if a label names an undeclared generator or has an index
  /// below 1.
  SurgeryAlgebra(Dga algebra, std::map<std::string, SurgeryLabel> labels);
  SurgeryAlgebra(Dga algebra, std::map<std::string, SurgeryLabel> labels, Dga pre_quotient,
                 OrderReversingMarking order_reversing);

  /// Number of cocores.
  int k() const { return k_; }
  const Dga& algebra() const { return algebra_; }
  const std::map<std::string, SurgeryLabel>& labels() const { return labels_; }
  const std::optional<Dga>& pre_quotient() const { return pre_quotient_; }
  const OrderReversingMarking& order_reversing() const { return order_reversing_; }
  /// The pre-quotient algebra when present, else the quotient.
  const Dga& full() const { return pre_quotient_ ? *pre_quotient_ : algebra_; }

  SurgeryLabel label(const std::string& name) const;
  /// Filtration level: i for a/b/c chords with first index i, k+1 for base.
  int level(const std::string& name) const;
  std::vector<std::string> base_names() const;
  /// Sub-DGA on the base chords; throws DgaError if a base differential
  /// leaves the base.
  Dga base_ce() const;

  std::optional<std::string> a_name(int i) const;
  std::optional<std::string> b_name(int i, int j, int m) const;
  std::optional<std::string> c_name(int i, int j, int m) const;
  /// Pairs (j, m) with a c^m_ij chord, in increasing action of c^m_ij.
  std::vector<std::pair<int, int>> order(int i) const;

 private:
  void index_labels();

  Dga algebra_;
  std::map<std::string, SurgeryLabel> labels_;
  std::optional<Dga> pre_quotient_;
  OrderReversingMarking order_reversing_;
  int k_ = 0;
  std::map<std::tuple<ChordRole, int, int, int>, std::string> by_index_;
};

/// Checks the labelling, the filtration, the a/b/c differential shapes with
/// their <_i ordering, the unit coefficient on a_j c^m_ij, distinct b/c
/// actions and the action inequality.
ValidationReport validate_surgery_shape(const SurgeryAlgebra& s);

struct GenerationCertificate {
  /// On the pre-quotient algebra when there is one (zero on marked chords).
  Augmentation augmentation;
  /// e o d on every generator of the full algebra, plus degree support.
  ValidationReport verification;
  /// Conditions on base chords, a-chords and order-reversing chords.
  ValidationReport conditions;
  /// c-chords of nonzero degree where the recursion asked for a nonzero value.
  std::vector<std::string> degree_conflicts;

  bool ok() const { return verification.ok() && conditions.ok() && degree_conflicts.empty(); }
};

/// Builds e' by descending induction on the filtration: e' = eb on base chords,
/// e'(a_i) = 1, e'(b^m_ij) = 0, and along <_i
///   e'(c^m_ij) = -e'(alpha^m_j) - sum_{(h,l) <_i (j,m)} e'(w^ml_jh) e'(c^l_ih).
/// Throws PreconditionError when the shape, d^2 = 0, or the base augmentation
/// fails.
GenerationCertificate construct_surgery_augmentation(const SurgeryAlgebra& s, const Augmentation& eb);

/// Independent recheck of a certificate against s and eb.
ValidationReport verify_certificate(const SurgeryAlgebra& s, const GenerationCertificate& c, const Augmentation& eb);

struct RandomSurgeryOptions {
  int k = 1;
  /// Upper bound on m0(i, j), the number of b/c chord pairs per (i, j).
  int max_chords = 0;
  std::uint64_t seed = 0;
  Field field = Field(2);
  /// Number of order-reversing chords added to a pre-quotient algebra.
  int order_reversing = 0;
  int max_attempts = 64;
};

/// Deterministic random instance passing validate_surgery_shape and d^2 = 0.
/// Throws Error if no attempt within the budget validates.
SurgeryAlgebra random_surgery_instance(const RandomSurgeryOptions& options);

}  // namespace cealg
