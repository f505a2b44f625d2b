#include "cealg/field.hpp"

#include <string>

#include "cealg/error.hpp"

namespace cealg {

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Field::Field(std::uint32_t p) : p_(p) {
  if (!is_prime(p) || p > kMaxCharacteristic)
    throw Error("field characteristic must be a prime <= 97, got " + std::to_string(p));
}

Scalar Field::zero() const { return Scalar(*this, 0); }
Scalar Field::one() const { return Scalar(*this, 1); }
Scalar Field::operator()(std::int64_t value) const { return Scalar(*this, value); }

Scalar::Scalar(Field field, std::int64_t value) : p_(static_cast<std::uint16_t>(field.characteristic())) {
  std::int64_t r = value % static_cast<std::int64_t>(p_);
  if (r < 0) r += p_;
  value_ = static_cast<std::uint16_t>(r);
}

void Scalar::require_same_field(Scalar other) const {
  if (p_ != other.p_)
    throw FieldMismatch("scalar arithmetic mixes F_" + std::to_string(p_) + " and F_" + std::to_string(other.p_));
}

Scalar Scalar::operator-() const { return Scalar(field(), -static_cast<std::int64_t>(value_)); }

Scalar& Scalar::operator+=(Scalar rhs) {
  require_same_field(rhs);
  value_ = static_cast<std::uint16_t>((value_ + rhs.value_) % p_);
  return *this;
}

Scalar& Scalar::operator-=(Scalar rhs) {
  require_same_field(rhs);
  value_ = static_cast<std::uint16_t>((value_ + p_ - rhs.value_) % p_);
  return *this;
}

Scalar& Scalar::operator*=(Scalar rhs) {
  require_same_field(rhs);
  value_ = static_cast<std::uint16_t>((static_cast<std::uint32_t>(value_) * rhs.value_) % p_);
  return *this;
}

Scalar Scalar::inverse() const {
  if (value_ == 0) throw Error("inverse of zero in F_" + std::to_string(p_));
  // Fermat: a^(p-2)
  std::uint32_t result = 1, base = value_, e = p_ - 2u;
  while (e) {
    if (e & 1u) result = result * base % p_;
    base = base * base % p_;
    e >>= 1u;
  }
  return Scalar(field(), result);
}

bool operator==(Scalar a, Scalar b) {
  a.require_same_field(b);
  return a.value_ == b.value_;
}

std::ostream& operator<<(std::ostream& os, Scalar s) { return os << s.value(); }

}  // namespace cealg
