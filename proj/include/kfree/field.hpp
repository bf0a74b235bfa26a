#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace kfree {

/// Packed element encoding: sum of coords[i] * p^i, so 0 and 1 are the zero
/// and unit of every field and values range over [0, q).
using Elem = std::uint32_t;

/// The finite field GF(p^f) in a polynomial basis over GF(p).
///
/// Instances are interned: make_field hands out references that live for the
/// whole program and are never mutated, so they can be shared freely across
/// threads and compared by address.
class Field {
 public:
  static constexpr std::uint32_t kMaxOrder = 1u << 16;

  std::uint32_t p() const { return p_; }
  std::uint32_t f() const { return f_; }
  std::uint32_t q() const { return q_; }

  /// Monic defining polynomial over GF(p), coefficients low-to-high (length f+1).
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }

  Elem add(Elem a, Elem b) const;
  Elem sub(Elem a, Elem b) const { return add(a, neg_[b]); }
  Elem neg(Elem a) const { return neg_[a]; }
  Elem mul(Elem a, Elem b) const;
  Elem inv(Elem a) const;  // throws DivisionByZero on 0
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::uint64_t e) const;

  /// a^p, the Frobenius automorphism.
  Elem frobenius(Elem a) const { return pow(a, p_); }
  /// The unique b with b^p = a, computed as a^(p^(f-1)).
  Elem pth_root(Elem a) const;

  /// Image of an integer under Z -> GF(p) -> GF(q).
  Elem from_int(std::int64_t n) const;

  std::vector<std::uint32_t> coords(Elem a) const;
  Elem from_coords(std::span<const std::uint32_t> c) const;

  /// Multiplication on coordinate vectors, reducing by the modulus directly.
  /// Slow; used to build the log tables and as an independent check.
  Elem mul_by_coords(Elem a, Elem b) const;

  Elem generator() const { return gen_; }

  std::string name() const;

 private:
  friend const Field& make_field(std::uint32_t p, std::uint32_t f);
  Field(std::uint32_t p, std::uint32_t f, std::vector<std::uint32_t> modulus);

  std::uint32_t p_;
  std::uint32_t f_;
  std::uint32_t q_;
  std::vector<std::uint32_t> modulus_;
  std::vector<Elem> neg_;
  // exp_ has length 2(q-1) so log sums index without a reduction.
  std::vector<Elem> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<std::uint16_t> add_table_;  // q*q entries when small
  Elem gen_ = 1;
};

/// GF(p^f) with the numerically smallest monic irreducible modulus of degree f
/// (coefficients read as base-p digits, constant term least significant).
/// For f = 1 the modulus is x. Throws DomainError for non-prime p, f = 0 or
/// p^f > 2^16.
const Field& make_field(std::uint32_t p, std::uint32_t f);

/// Resolve a prime power q into GF(q). Throws DomainError if q is not one.
const Field& make_field_of_order(std::uint32_t q);

bool is_prime(std::uint64_t n);

/// (p, f) with q = p^f, or (0, 0) if q is not a prime power.
std::pair<std::uint32_t, std::uint32_t> prime_power_split(std::uint64_t q);

/// Value type pairing a packed element with its field.
class FieldElement {
 public:
  FieldElement(const Field& field, Elem value);

  static FieldElement from_coords(const Field& field,
                                  std::span<const std::uint32_t> c) {
    return {field, field.from_coords(c)};
  }

  const Field& field() const { return *field_; }
  Elem value() const { return value_; }
  std::vector<std::uint32_t> coords() const { return field_->coords(value_); }
  bool is_zero() const { return value_ == 0; }

  FieldElement inv() const;
  FieldElement pow(std::uint64_t e) const;

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b);
  FieldElement operator-() const { return {*field_, field_->neg(value_)}; }

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.field_ == b.field_ && a.value_ == b.value_;
  }

 private:
  const Field* field_;
  Elem value_;
};

}  // namespace kfree
