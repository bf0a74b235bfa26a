#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kfree/field.hpp"

namespace kfree {

/// Degree of the zero polynomial; compares below every real degree.
inline constexpr int kZeroDegree = std::numeric_limits<int>::min();

/// Dense univariate polynomial over a Field, index i holding the coefficient
/// of x^i. Always canonical: no trailing zero coefficients.
///
/// Polynomials are totally ordered by their numeric encoding sum c_i q^i
/// (packed coefficient values as base-q digits). Within a fixed degree this is
/// the lexicographic order used for every enumeration in the library.
class Poly {
 public:
  explicit Poly(const Field& field) : field_(&field) {}
  Poly(const Field& field, std::vector<Elem> coeffs);

  static Poly constant(const Field& field, Elem c);
  static Poly monomial(const Field& field, Elem c, std::size_t degree);
  static Poly x(const Field& field) { return monomial(field, 1, 1); }
  /// Polynomial whose base-q digits (constant term first) spell index.
  static Poly from_index(const Field& field, std::uint64_t index);
  /// x^degree + from_index(index); index < q^degree.
  static Poly monic_from_index(const Field& field, int degree, std::uint64_t index);

  const Field& field() const { return *field_; }
  int degree() const { return c_.empty() ? kZeroDegree : static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  bool is_constant() const { return c_.size() <= 1; }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }

  Elem coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
  Elem lead() const { return c_.empty() ? 0 : c_.back(); }
  std::span<const Elem> coeffs() const { return c_; }

  /// Inverse of from_index; throws std::overflow_error past 64 bits.
  std::uint64_t index() const;

  Poly monic() const;
  Poly scaled(Elem c) const;

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly operator-() const;

  friend bool operator==(const Poly& a, const Poly& b) {
    return a.field_ == b.field_ && a.c_ == b.c_;
  }
  friend std::strong_ordering operator<=>(const Poly& a, const Poly& b);

 private:
  void normalize();

  const Field* field_;
  std::vector<Elem> c_;
};

void require_same_field(const Poly& a, const Poly& b);

/// Quotient and remainder; b may be non-monic. Throws DivisionByZero on b = 0.
std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b);
Poly operator/(const Poly& a, const Poly& b);
Poly operator%(const Poly& a, const Poly& b);
inline bool divides(const Poly& d, const Poly& f) { return (f % d).is_zero(); }

/// Monic gcd; gcd(0, 0) = 0.
Poly gcd(const Poly& a, const Poly& b);
/// Extended Euclid: g = s*a + t*b with g the monic gcd.
struct ExtendedGcd {
  Poly g, s, t;
};
ExtendedGcd extended_gcd(const Poly& a, const Poly& b);

Poly pow(Poly base, std::uint64_t e);
Poly pow_mod(Poly base, std::uint64_t e, const Poly& m);

/// Formal derivative iterated `order` times.
Poly derivative(const Poly& f, unsigned order = 1);

/// True iff every coefficient of x^i with p not dividing i vanishes.
bool in_pth_power_subring(const Poly& f);

/// H with H^p = f; throws DomainError when f is not in F_q[x^p].
Poly pth_root(const Poly& f);

/// Index class j in [0, p): D^j holds polynomials whose coefficients of x^i
/// vanish whenever i = j (mod p).
struct CoeffPattern {
  std::uint32_t j;
};
bool in_pattern(const Poly& f, CoeffPattern pattern);

/// Monomial-wise antiderivative a_i (i+1)^{-1} x^{i+1}; defined on D^{p-1}
/// (throws DomainError elsewhere).
Poly obvious_antiderivative(const Poly& h);

/// f with the coefficients of x^0..x^h cleared; the canonical centre of the
/// interval of length h around f.
Poly clear_low(const Poly& f, int h);

/// Human-readable form such as "x^3 + x + 1". Coefficients of extension
/// fields are printed as their packed value in brackets.
std::string to_pretty(const Poly& f);

}  // namespace kfree
