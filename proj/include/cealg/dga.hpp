#pragma once

#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cealg/generator.hpp"
#include "cealg/ncpoly.hpp"
#include "cealg/report.hpp"

namespace cealg {

/// Free unital noncommutative DGA over F_p with a declared generating set.
///
/// Immutable once built. Construction rejects (DgaError) duplicate names,
/// invalid identifiers, differentials for or mentioning undeclared generators,
/// polynomials over another field, and generator kind/action contradictions.
/// Everything else (d^2 = 0, grading, action filtration) is checked by the
/// validators below, which report instead of throwing.
class Dga {
 public:
  explicit Dga(Field field = Field(2), int d_degree = 1);
  Dga(Field field, int d_degree, std::vector<Generator> generators, std::map<std::string, NcPoly> differential);

  Field field() const { return field_; }
  /// Degree of the differential: +1 is cohomological.
  int d_degree() const { return d_degree_; }
  /// Generators in declaration order.
  const std::vector<Generator>& generators() const { return generators_; }
  const Generator* find(std::string_view name) const;
  /// Throws DgaError when undeclared.
  const Generator& generator(std::string_view name) const;
  /// d(name); the zero polynomial when no differential was given.
  const NcPoly& differential(std::string_view name) const;
  /// Only the nonzero differentials, keyed by generator name.
  const std::map<std::string, NcPoly>& differentials() const { return differential_; }

  int degree(const Word& w) const;
  Rational action(const Word& w) const;

  friend bool operator==(const Dga& a, const Dga& b);

 private:
  Field field_;
  int d_degree_;
  std::vector<Generator> generators_;
  std::unordered_map<std::string, std::size_t> index_;
  std::map<std::string, NcPoly> differential_;
  NcPoly zero_;
};

/// Linear extension of d with the graded Leibniz rule
///   d(ab) = (da) b + (-1)^{|a|} a (db),   d(1) = 0.
/// Throws DgaError when q mentions an undeclared generator.
NcPoly apply_differential(const Dga& dga, const NcPoly& q);

/// Lists every generator g with d(d(g)) != 0, with the residual.
ValidationReport validate_d_squared(const Dga& dga);

/// Flags every monomial of every d(g) whose degree differs from
/// degree(g) + d_degree.
ValidationReport validate_grading(const Dga& dga);

/// Flags every monomial of d(g) whose action is not strictly below
/// action(g); the unit word has action 0.
ValidationReport validate_action(const Dga& dga);

/// Largest action among the monomials of q (nullopt for q = 0).
std::optional<Rational> max_action(const Dga& dga, const NcPoly& q);

/// The sub-DGA on the named generators (declaration order kept).
/// Throws DgaError if some kept differential mentions a dropped generator.
Dga restrict_to(const Dga& dga, const std::vector<std::string>& keep);

}  // namespace cealg
