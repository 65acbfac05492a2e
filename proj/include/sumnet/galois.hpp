// Prime-field arithmetic GF(p).
#ifndef SUMNET_GALOIS_HPP
#define SUMNET_GALOIS_HPP

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace sumnet {

/// Raised when operands or matrices from different fields are combined.
class FieldMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DivisionByZero : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Stored residues are canonical in [0, p). 64-bit storage keeps products of
/// two residues exact for every admissible modulus.
using Residue = std::int64_t;

/// The prime field GF(p). Only the modulus is stored, so copies are free and
/// every member is safe to call concurrently.
class PrimeField {
 public:
  /// Moduli must stay below this ceiling so that a*b fits in 64 bits.
  static constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 31;

  /// Throws std::invalid_argument unless p is prime and p < kMaxModulus.
  explicit PrimeField(std::uint64_t p);

  std::uint64_t modulus() const noexcept { return p_; }
  Residue characteristic() const noexcept { return static_cast<Residue>(p_); }

  Residue reduce(std::int64_t n) const noexcept {
    const auto p = static_cast<std::int64_t>(p_);
    const std::int64_t r = n % p;
    return r < 0 ? r + p : r;
  }
  Residue add(Residue a, Residue b) const noexcept {
    const Residue s = a + b;
    return s >= static_cast<Residue>(p_) ? s - static_cast<Residue>(p_) : s;
  }
  Residue sub(Residue a, Residue b) const noexcept {
    return a >= b ? a - b : a + static_cast<Residue>(p_) - b;
  }
  Residue neg(Residue a) const noexcept { return a == 0 ? 0 : static_cast<Residue>(p_) - a; }
  Residue mul(Residue a, Residue b) const noexcept { return (a * b) % static_cast<Residue>(p_); }
  /// Throws DivisionByZero for a == 0.
  Residue inv(Residue a) const;

  /// True iff p divides n, i.e. n is zero in this field.
  bool divides(std::int64_t n) const noexcept { return reduce(n) == 0; }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  std::uint64_t p_;
};

/// Trial division primality check.
bool is_prime(std::uint64_t n) noexcept;

/// A field element: a canonical residue tagged with its field.
class Felt {
 public:
  Felt(PrimeField field, std::int64_t n) : field_(field), value_(field.reduce(n)) {}

  const PrimeField& field() const noexcept { return field_; }
  Residue value() const noexcept { return value_; }

  Felt inverse() const;

  friend Felt operator+(const Felt& a, const Felt& b);
  friend Felt operator-(const Felt& a, const Felt& b);
  friend Felt operator*(const Felt& a, const Felt& b);
  friend Felt operator/(const Felt& a, const Felt& b);
  Felt operator-() const { return Felt(field_, field_.neg(value_)); }

  friend bool operator==(const Felt& a, const Felt& b) {
    return a.field_ == b.field_ && a.value_ == b.value_;
  }

 private:
  PrimeField field_;
  Residue value_;
};

Felt add(const Felt& a, const Felt& b);
Felt mul(const Felt& a, const Felt& b);
Felt inv(const Felt& a);
Felt reduce(const PrimeField& field, std::int64_t n);

std::ostream& operator<<(std::ostream& os, const Felt& x);

}  // namespace sumnet

#endif  // SUMNET_GALOIS_HPP
