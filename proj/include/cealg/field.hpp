#pragma once

#include <cstdint>
#include <ostream>

namespace cealg {

class Scalar;

/// A prime field F_p with p <= 97.
class Field {
 public:
  static constexpr std::uint32_t kMaxCharacteristic = 97;

  /// Throws cealg::Error unless p is a prime no larger than 97.
  explicit Field(std::uint32_t p = 2);

  std::uint32_t characteristic() const { return p_; }

  Scalar zero() const;
  Scalar one() const;
  /// Reduces any integer, negative ones included, into [0, p).
  Scalar operator()(std::int64_t value) const;

  friend bool operator==(Field, Field) = default;

 private:
  std::uint32_t p_;
};

bool is_prime(std::uint32_t n);

/// Residue class in F_p. Carries its characteristic so that mixing fields is
/// caught at the point of arithmetic (FieldMismatch).
class Scalar {
 public:
  Scalar(Field field, std::int64_t value);

  std::uint32_t value() const { return value_; }
  Field field() const { return Field(p_); }
  bool is_zero() const { return value_ == 0; }

  Scalar operator-() const;
  Scalar& operator+=(Scalar rhs);
  Scalar& operator-=(Scalar rhs);
  Scalar& operator*=(Scalar rhs);
  /// Multiplicative inverse; throws cealg::Error on zero.
  Scalar inverse() const;

  friend Scalar operator+(Scalar a, Scalar b) { return a += b; }
  friend Scalar operator-(Scalar a, Scalar b) { return a -= b; }
  friend Scalar operator*(Scalar a, Scalar b) { return a *= b; }
  friend bool operator==(Scalar a, Scalar b);

 private:
  void require_same_field(Scalar other) const;

  std::uint16_t value_;
  std::uint16_t p_;
};

std::ostream& operator<<(std::ostream& os, Scalar s);

}  // namespace cealg
