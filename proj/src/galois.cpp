#include "sumnet/galois.hpp"

#include <ostream>

namespace sumnet {

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

PrimeField::PrimeField(std::uint64_t p) : p_(p) {
  if (p >= kMaxModulus) {
    throw std::invalid_argument("modulus " + std::to_string(p) + " exceeds the 2^31 ceiling");
  }
  if (!is_prime(p)) {
    throw std::invalid_argument("modulus " + std::to_string(p) + " is not prime");
  }
}

Residue PrimeField::inv(Residue a) const {
  a = reduce(a);
  if (a == 0) throw DivisionByZero("inverse of zero in GF(" + std::to_string(p_) + ")");
  // Extended Euclid on (a, p).
  std::int64_t r0 = static_cast<std::int64_t>(p_), r1 = a;
  std::int64_t t0 = 0, t1 = 1;
  while (r1 != 0) {
    const std::int64_t quot = r0 / r1;
    std::int64_t tmp = r0 - quot * r1;
    r0 = r1;
    r1 = tmp;
    tmp = t0 - quot * t1;
    t0 = t1;
    t1 = tmp;
  }
  return reduce(t0);
}

namespace {

void require_same(const Felt& a, const Felt& b) {
  if (!(a.field() == b.field())) {
    throw FieldMismatch("operands from GF(" + std::to_string(a.field().modulus()) + ") and GF(" +
                        std::to_string(b.field().modulus()) + ")");
  }
}

}  // namespace

Felt Felt::inverse() const { return Felt(field_, field_.inv(value_)); }

Felt operator+(const Felt& a, const Felt& b) {
  require_same(a, b);
  return Felt(a.field_, a.field_.add(a.value_, b.value_));
}

Felt operator-(const Felt& a, const Felt& b) {
  require_same(a, b);
  return Felt(a.field_, a.field_.sub(a.value_, b.value_));
}

Felt operator*(const Felt& a, const Felt& b) {
  require_same(a, b);
  return Felt(a.field_, a.field_.mul(a.value_, b.value_));
}

Felt operator/(const Felt& a, const Felt& b) { return a * b.inverse(); }

Felt add(const Felt& a, const Felt& b) { return a + b; }
Felt mul(const Felt& a, const Felt& b) { return a * b; }
Felt inv(const Felt& a) { return a.inverse(); }
Felt reduce(const PrimeField& field, std::int64_t n) { return Felt(field, n); }

std::ostream& operator<<(std::ostream& os, const Felt& x) {
  return os << x.value() << " (mod " << x.field().modulus() << ')';
}

}  // namespace sumnet
