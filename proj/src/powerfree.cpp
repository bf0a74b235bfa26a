#include "kfree/powerfree.hpp"

#include <algorithm>
#include <map>

#include "kfree/error.hpp"

namespace kfree {
namespace {

void sff(const Poly& f, unsigned scale, std::vector<std::pair<Poly, unsigned>>& out) {
  if (f.is_constant()) return;
  const Poly df = derivative(f);
  if (df.is_zero()) {
    sff(pth_root(f), scale * f.field().p(), out);
    return;
  }
  Poly c = gcd(f, df);
  Poly w = f / c;
  for (unsigned i = 1; !w.is_one(); ++i) {
    Poly y = gcd(w, c);
    Poly fac = w / y;
    if (!fac.is_one()) out.emplace_back(fac.monic(), i * scale);
    w = std::move(y);
    c = c / w;
  }
  if (!c.is_one()) sff(pth_root(c.monic()), scale * f.field().p(), out);
}

// a * a^q * ... * a^{q^{e-1}} mod g
Poly frobenius_norm(const Poly& a, int e, const Poly& g) {
  const Field& k = g.field();
  Poly acc = a % g;
  Poly power = acc;
  for (int i = 1; i < e; ++i) {
    power = pow_mod(power, k.q(), g);
    acc = acc * power % g;
  }
  return acc;
}

// a + a^2 + a^4 + ... + a^{2^{m-1}} mod g
Poly binary_trace(const Poly& a, int m, const Poly& g) {
  Poly acc = a % g;
  Poly power = acc;
  for (int i = 1; i < m; ++i) {
    power = power * power % g;
    acc += power;
  }
  return acc;
}

void edf(const Poly& g, int e, std::vector<Poly>& out) {
  if (g.degree() == e) {
    out.push_back(g);
    return;
  }
  const Field& k = g.field();
  const Poly one = Poly::constant(k, 1);
  for (std::uint64_t t = k.q();; ++t) {
    const Poly a = Poly::from_index(k, t);
    if (a.degree() >= g.degree()) throw std::logic_error("equal-degree sweep exhausted");
    Poly b = k.p() == 2 ? binary_trace(a, e * static_cast<int>(k.f()), g)
                        : pow_mod(frobenius_norm(a, e, g), (k.q() - 1) / 2, g) - one;
    Poly d = gcd(g, b);
    if (d.degree() > 0 && d.degree() < g.degree()) {
      edf(d, e, out);
      edf(g / d, e, out);
      return;
    }
  }
}

}  // namespace

unsigned FactorizationProfile::max_multiplicity() const {
  unsigned m = 0;
  for (const auto& [p, e] : factors) m = std::max(m, e);
  return m;
}

Poly FactorizationProfile::product(const Field& field) const {
  Poly acc = Poly::constant(field, unit);
  for (const auto& [p, e] : factors) acc = acc * pow(p, e);
  return acc;
}

std::vector<std::pair<Poly, unsigned>> squarefree_decomposition(const Poly& f) {
  if (f.is_zero()) throw DomainError("squarefree decomposition of the zero polynomial");
  std::vector<std::pair<Poly, unsigned>> out;
  sff(f.monic(), 1, out);
  return out;
}

std::vector<std::pair<Poly, int>> distinct_degree_split(const Poly& f) {
  const Field& k = f.field();
  std::vector<std::pair<Poly, int>> out;
  Poly rest = f.monic();
  const Poly x = Poly::x(k);
  Poly h = x % rest;
  for (int i = 1; rest.degree() >= 2 * i; ++i) {
    h = pow_mod(h, k.q(), rest);
    Poly g = gcd(rest, h - x);
    if (!g.is_one()) {
      out.emplace_back(g, i);
      rest = rest / g;
      h = h % rest;
    }
  }
  if (rest.degree() > 0) out.emplace_back(rest, rest.degree());
  return out;
}

std::vector<Poly> equal_degree_split(const Poly& g, int e) {
  std::vector<Poly> out;
  if (g.degree() <= 0) return out;
  edf(g.monic(), e, out);
  return out;
}

FactorizationProfile factorize(const Poly& f) {
  if (f.is_zero()) throw DomainError("factorize: zero polynomial");
  std::map<Poly, unsigned> acc;
  for (const auto& [part, mult] : squarefree_decomposition(f)) {
    for (const auto& [g, e] : distinct_degree_split(part)) {
      for (auto& irr : equal_degree_split(g, e)) acc[std::move(irr)] += mult;
    }
  }
  FactorizationProfile profile{f.lead(), {}};
  profile.factors.assign(acc.begin(), acc.end());
  return profile;
}

unsigned max_multiplicity(const Poly& f) {
  unsigned m = 0;
  for (const auto& [part, mult] : squarefree_decomposition(f)) m = std::max(m, mult);
  return m;
}

bool is_k_free(const Poly& f, unsigned k) {
  if (k < 2) throw DomainError("is_k_free: k must be at least 2");
  if (f.is_zero()) throw DomainError("is_k_free: the zero polynomial has no k-free status");
  return max_multiplicity(f) < k;
}

}  // namespace kfree
