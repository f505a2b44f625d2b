#include "cealg/ncpoly.hpp"

#include <string>

#include "cealg/error.hpp"

namespace cealg {

Word operator*(const Word& a, const Word& b) {
  Word out;
  out.letters.reserve(a.size() + b.size());
  out.letters.insert(out.letters.end(), a.letters.begin(), a.letters.end());
  out.letters.insert(out.letters.end(), b.letters.begin(), b.letters.end());
  return out;
}

std::string to_string(const Word& w) {
  if (w.is_unit()) return "1";
  std::string out;
  for (const auto& l : w.letters) {
    if (!out.empty()) out += ' ';
    out += l;
  }
  return out;
}

NcPoly NcPoly::constant(Scalar c) { return monomial(Word{}, c); }

NcPoly NcPoly::monomial(Word w, Scalar c) {
  NcPoly p(c.field());
  p.add_term(w, c);
  return p;
}

NcPoly NcPoly::letter(Field field, std::string name) { return monomial(Word{std::move(name)}, field.one()); }

Scalar NcPoly::coefficient(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? field_.zero() : it->second;
}

void NcPoly::add_term(const Word& w, Scalar c) {
  if (c.field() != field_)
    throw FieldMismatch("coefficient in F_" + std::to_string(c.field().characteristic()) + " added to polynomial over F_" +
                        std::to_string(field_.characteristic()));
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

void NcPoly::require_same_field(const NcPoly& other) const {
  if (field_ != other.field_)
    throw FieldMismatch("polynomial arithmetic mixes F_" + std::to_string(field_.characteristic()) + " and F_" +
                        std::to_string(other.field_.characteristic()));
}

NcPoly& NcPoly::operator+=(const NcPoly& rhs) {
  require_same_field(rhs);
  for (const auto& [w, c] : rhs.terms_) add_term(w, c);
  return *this;
}

NcPoly& NcPoly::operator-=(const NcPoly& rhs) {
  require_same_field(rhs);
  for (const auto& [w, c] : rhs.terms_) add_term(w, -c);
  return *this;
}

NcPoly& NcPoly::operator*=(Scalar c) {
  if (c.field() != field_) throw FieldMismatch("scalar and polynomial over different fields");
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [w, v] : terms_) v *= c;
  return *this;
}

NcPoly NcPoly::operator-() const {
  NcPoly out(field_);
  for (const auto& [w, c] : terms_) out.terms_.emplace(w, -c);
  return out;
}

NcPoly operator*(const NcPoly& a, const NcPoly& b) {
  a.require_same_field(b);
  NcPoly out(a.field_);
  for (const auto& [wa, ca] : a.terms_)
    for (const auto& [wb, cb] : b.terms_) out.add_term(wa * wb, ca * cb);
  return out;
}

bool operator==(const NcPoly& a, const NcPoly& b) {
  a.require_same_field(b);
  return a.terms_ == b.terms_;
}

std::string to_string(const NcPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [w, c] : p.terms()) {
    if (!out.empty()) out += " + ";
    if (w.is_unit()) {
      out += std::to_string(c.value());
    } else {
      if (c.value() != 1) out += std::to_string(c.value()) + " ";
      out += to_string(w);
    }
  }
  return out;
}

}  // namespace cealg
