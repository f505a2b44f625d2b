#pragma once

#include <compare>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

#include "cealg/field.hpp"

namespace cealg {

/// Ordered product of generator names. The empty word is the unit 1.
struct Word {
  std::vector<std::string> letters;

  Word() = default;
  Word(std::initializer_list<std::string> l) : letters(l) {}
  explicit Word(std::vector<std::string> l) : letters(std::move(l)) {}

  bool is_unit() const { return letters.empty(); }
  std::size_t size() const { return letters.size(); }

  friend Word operator*(const Word& a, const Word& b);
  friend auto operator<=>(const Word&, const Word&) = default;
  friend bool operator==(const Word&, const Word&) = default;
};

/// Space-separated letters, or "1" for the unit word.
std::string to_string(const Word& w);

/// Finite formal sum of words with coefficients in F_p, kept in canonical
/// form: every stored coefficient is nonzero, words are unique and ordered.
class NcPoly {
 public:
  using Terms = std::map<Word, Scalar>;

  explicit NcPoly(Field field) : field_(field) {}

  static NcPoly zero(Field field) { return NcPoly(field); }
  static NcPoly one(Field field) { return constant(field.one()); }
  static NcPoly constant(Scalar c);
  static NcPoly monomial(Word w, Scalar c);
  static NcPoly letter(Field field, std::string name);

  Field field() const { return field_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  /// Coefficient of w (zero when absent).
  Scalar coefficient(const Word& w) const;

  /// Adds c * w, dropping the term if the coefficient cancels.
  void add_term(const Word& w, Scalar c);

  NcPoly& operator+=(const NcPoly& rhs);
  NcPoly& operator-=(const NcPoly& rhs);
  NcPoly& operator*=(Scalar c);
  NcPoly operator-() const;

  friend NcPoly operator+(NcPoly a, const NcPoly& b) { return a += b; }
  friend NcPoly operator-(NcPoly a, const NcPoly& b) { return a -= b; }
  friend NcPoly operator*(NcPoly a, Scalar c) { return a *= c; }
  friend NcPoly operator*(Scalar c, NcPoly a) { return a *= c; }
  /// Bilinear concatenation product.
  friend NcPoly operator*(const NcPoly& a, const NcPoly& b);
  friend bool operator==(const NcPoly& a, const NcPoly& b);

 private:
  void require_same_field(const NcPoly& other) const;

  Field field_;
  Terms terms_;
};

/// Monomials joined by " + ", each "c name name" with the coefficient
/// omitted when it is 1; the zero polynomial prints as "0".
std::string to_string(const NcPoly& p);

}  // namespace cealg
