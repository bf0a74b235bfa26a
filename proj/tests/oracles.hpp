#pragma once

// Slow reference implementations used to cross-check the library. They share
// only the packed element encoding and Field::mul_by_coords with it.

#include <cstdint>
#include <vector>

#include "kfree/field.hpp"
#include "kfree/poly.hpp"

namespace oracle {

using kfree::Elem;
using kfree::Field;
using Coeffs = std::vector<Elem>;  // low to high, trimmed

inline void trim(Coeffs& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Elem add(const Field& F, Elem a, Elem b) {
  auto ca = F.coords(a), cb = F.coords(b);
  for (std::size_t i = 0; i < ca.size(); ++i) ca[i] = (ca[i] + cb[i]) % F.p();
  return F.from_coords(ca);
}

inline Elem neg(const Field& F, Elem a) {
  auto ca = F.coords(a);
  for (auto& c : ca) c = (F.p() - c) % F.p();
  return F.from_coords(ca);
}

inline Elem mul(const Field& F, Elem a, Elem b) { return F.mul_by_coords(a, b); }

inline Elem inv(const Field& F, Elem a) {
  for (Elem b = 1; b < F.q(); ++b)
    if (mul(F, a, b) == 1) return b;
  return 0;
}

inline Coeffs padd(const Field& F, Coeffs a, const Coeffs& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = add(F, a[i], b[i]);
  trim(a);
  return a;
}

inline Coeffs pneg(const Field& F, Coeffs a) {
  for (auto& c : a) c = neg(F, c);
  return a;
}

inline Coeffs psub(const Field& F, const Coeffs& a, const Coeffs& b) { return padd(F, a, pneg(F, b)); }

inline Coeffs pmul(const Field& F, const Coeffs& a, const Coeffs& b) {
  if (a.empty() || b.empty()) return {};
  Coeffs r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = add(F, r[i + j], mul(F, a[i], b[j]));
  trim(r);
  return r;
}

inline Coeffs ppow(const Field& F, const Coeffs& a, unsigned e) {
  Coeffs r{1};
  for (unsigned i = 0; i < e; ++i) r = pmul(F, r, a);
  return r;
}

inline Coeffs prem(const Field& F, Coeffs a, const Coeffs& b) {
  const Elem li = inv(F, b.back());
  while (a.size() >= b.size()) {
    const Elem c = mul(F, a.back(), li);
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = add(F, a[shift + i], neg(F, mul(F, c, b[i])));
    trim(a);
  }
  return a;
}

inline Coeffs from(const kfree::Poly& f) { return Coeffs(f.coeffs().begin(), f.coeffs().end()); }
inline kfree::Poly to(const Field& F, const Coeffs& c) { return kfree::Poly(F, c); }

inline Coeffs monic_of(const Field& F, int degree, std::uint64_t index) {
  Coeffs c(degree + 1, 0);
  c[degree] = 1;
  for (int i = 0; i < degree; ++i) {
    c[i] = static_cast<Elem>(index % F.q());
    index /= F.q();
  }
  return c;
}

inline std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Trial division by every monic polynomial of degree 1..deg/2.
inline bool irreducible(const Field& F, const Coeffs& f) {
  const int n = static_cast<int>(f.size()) - 1;
  if (n < 1) return false;
  for (int d = 1; 2 * d <= n; ++d)
    for (std::uint64_t i = 0; i < ipow(F.q(), d); ++i)
      if (prem(F, f, monic_of(F, d, i)).empty()) return false;
  return true;
}

inline std::uint64_t count_irreducible(const Field& F, int d) {
  std::uint64_t c = 0;
  for (std::uint64_t i = 0; i < ipow(F.q(), d); ++i) c += irreducible(F, monic_of(F, d, i));
  return c;
}

// No monic G of positive degree with G^k | f.
inline bool k_free(const Field& F, const Coeffs& f, unsigned k) {
  const int n = static_cast<int>(f.size()) - 1;
  for (int d = 1; static_cast<int>(k) * d <= n; ++d)
    for (std::uint64_t i = 0; i < ipow(F.q(), d); ++i)
      if (prem(F, f, ppow(F, monic_of(F, d, i), k)).empty()) return false;
  return true;
}

inline int deg(const Coeffs& a) { return a.empty() ? -1 : static_cast<int>(a.size()) - 1; }

}  // namespace oracle
