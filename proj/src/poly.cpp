#include "kfree/poly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "kfree/error.hpp"

namespace kfree {

Poly::Poly(const Field& field, std::vector<Elem> coeffs) : field_(&field), c_(std::move(coeffs)) {
  for (Elem c : c_) {
    if (c >= field.q()) throw DomainError("coefficient out of range for " + field.name());
  }
  normalize();
}

void Poly::normalize() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Poly Poly::constant(const Field& field, Elem c) { return Poly(field, {c}); }

Poly Poly::monomial(const Field& field, Elem c, std::size_t degree) {
  std::vector<Elem> v(degree + 1, 0);
  v[degree] = c;
  return Poly(field, std::move(v));
}

Poly Poly::from_index(const Field& field, std::uint64_t index) {
  Poly out(field);
  const std::uint64_t q = field.q();
  for (; index; index /= q) out.c_.push_back(static_cast<Elem>(index % q));
  return out;
}

Poly Poly::monic_from_index(const Field& field, int degree, std::uint64_t index) {
  Poly out(field);
  out.c_.assign(static_cast<std::size_t>(degree) + 1, 0);
  const std::uint64_t q = field.q();
  for (int i = 0; i < degree; ++i, index /= q) out.c_[i] = static_cast<Elem>(index % q);
  if (index != 0) throw std::out_of_range("index exceeds q^degree");
  out.c_[degree] = 1;
  return out;
}

std::uint64_t Poly::index() const {
  std::uint64_t out = 0;
  const std::uint64_t q = field_->q();
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    if (out > (std::numeric_limits<std::uint64_t>::max() - *it) / q) {
      throw std::overflow_error("polynomial index exceeds 64 bits");
    }
    out = out * q + *it;
  }
  return out;
}

Poly Poly::monic() const {
  if (c_.empty() || c_.back() == 1) return *this;
  return scaled(field_->inv(c_.back()));
}

Poly Poly::scaled(Elem c) const {
  Poly out(*field_);
  if (c == 0) return out;
  out.c_.resize(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) out.c_[i] = field_->mul(c_[i], c);
  return out;
}

void require_same_field(const Poly& a, const Poly& b) {
  if (&a.field() != &b.field()) {
    throw FieldMismatch("polynomials over " + a.field().name() + " and " + b.field().name());
  }
}

Poly& Poly::operator+=(const Poly& o) {
  require_same_field(*this, o);
  if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), 0);
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = field_->add(c_[i], o.c_[i]);
  normalize();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  require_same_field(*this, o);
  if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), 0);
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = field_->sub(c_[i], o.c_[i]);
  normalize();
  return *this;
}

Poly& Poly::operator*=(const Poly& o) { return *this = *this * o; }

Poly operator*(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  const Field& k = a.field();
  Poly out(k);
  if (a.is_zero() || b.is_zero()) return out;
  out.c_.assign(a.c_.size() + b.c_.size() - 1, 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    const Elem ai = a.c_[i];
    if (ai == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) {
      out.c_[i + j] = k.add(out.c_[i + j], k.mul(ai, b.c_[j]));
    }
  }
  out.normalize();
  return out;
}

Poly Poly::operator-() const {
  Poly out(*this);
  for (auto& c : out.c_) c = field_->neg(c);
  return out;
}

std::strong_ordering operator<=>(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  if (auto cmp = a.c_.size() <=> b.c_.size(); cmp != 0) return cmp;
  for (std::size_t i = a.c_.size(); i-- > 0;) {
    if (auto cmp = a.c_[i] <=> b.c_[i]; cmp != 0) return cmp;
  }
  return std::strong_ordering::equal;
}

std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
  const Field& k = a.field();
  if (a.degree() < b.degree()) return {Poly(k), a};
  std::vector<Elem> r(a.coeffs().begin(), a.coeffs().end());
  const auto bc = b.coeffs();
  const std::size_t db = bc.size() - 1;
  const Elem lead_inv = k.inv(bc.back());
  std::vector<Elem> quot(r.size() - db, 0);
  for (std::size_t top = r.size(); top-- > db;) {
    const Elem c = k.mul(r[top], lead_inv);
    if (c == 0) continue;
    const std::size_t shift = top - db;
    quot[shift] = c;
    for (std::size_t i = 0; i <= db; ++i) {
      r[shift + i] = k.sub(r[shift + i], k.mul(c, bc[i]));
    }
  }
  r.resize(db);
  return {Poly(k, std::move(quot)), Poly(k, std::move(r))};
}

Poly operator/(const Poly& a, const Poly& b) { return divrem(a, b).first; }
Poly operator%(const Poly& a, const Poly& b) { return divrem(a, b).second; }

Poly gcd(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = x % y;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

ExtendedGcd extended_gcd(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  const Field& k = a.field();
  Poly r0 = a, r1 = b;
  Poly s0 = Poly::constant(k, 1), s1(k);
  Poly t0(k), t1 = Poly::constant(k, 1);
  while (!r1.is_zero()) {
    auto [quot, rem] = divrem(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(rem);
    Poly s2 = s0 - quot * s1;
    Poly t2 = t0 - quot * t1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  const Elem inv = k.inv(r0.lead());
  return {r0.scaled(inv), s0.scaled(inv), t0.scaled(inv)};
}

Poly pow(Poly base, std::uint64_t e) {
  Poly out = Poly::constant(base.field(), 1);
  for (; e; e >>= 1) {
    if (e & 1) out = out * base;
    if (e > 1) base = base * base;
  }
  return out;
}

Poly pow_mod(Poly base, std::uint64_t e, const Poly& m) {
  Poly out = Poly::constant(base.field(), 1) % m;
  base = base % m;
  for (; e; e >>= 1) {
    if (e & 1) out = out * base % m;
    if (e > 1) base = base * base % m;
  }
  return out;
}

Poly derivative(const Poly& f, unsigned order) {
  const Field& k = f.field();
  const auto c = f.coeffs();
  if (order == 0) return f;
  if (c.size() <= order) return Poly(k);
  const std::uint32_t p = k.p();
  std::vector<Elem> out(c.size() - order, 0);
  for (std::size_t i = order; i < c.size(); ++i) {
    // falling factorial i (i-1) ... (i-order+1) mod p
    std::uint64_t ff = 1;
    for (unsigned t = 0; t < order && ff; ++t) ff = ff * ((i - t) % p) % p;
    if (ff) out[i - order] = k.mul(c[i], static_cast<Elem>(ff));
  }
  return Poly(k, std::move(out));
}

bool in_pth_power_subring(const Poly& f) {
  const std::uint32_t p = f.field().p();
  const auto c = f.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i % p != 0 && c[i] != 0) return false;
  }
  return true;
}

Poly pth_root(const Poly& f) {
  if (!in_pth_power_subring(f)) throw DomainError("pth_root: polynomial is not in F_q[x^p]");
  const Field& k = f.field();
  const std::uint32_t p = k.p();
  const auto c = f.coeffs();
  std::vector<Elem> out(c.empty() ? 0 : (c.size() - 1) / p + 1, 0);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = k.pth_root(c[i * p]);
  return Poly(k, std::move(out));
}

bool in_pattern(const Poly& f, CoeffPattern pattern) {
  const std::uint32_t p = f.field().p();
  const auto c = f.coeffs();
  for (std::size_t i = pattern.j % p; i < c.size(); i += p) {
    if (c[i] != 0) return false;
  }
  return true;
}

Poly obvious_antiderivative(const Poly& h) {
  const Field& k = h.field();
  const std::uint32_t p = k.p();
  if (!in_pattern(h, {p - 1})) {
    throw DomainError("obvious_antiderivative: polynomial is not in D^{p-1}");
  }
  const auto c = h.coeffs();
  if (c.empty()) return Poly(k);
  std::vector<Elem> out(c.size() + 1, 0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    out[i + 1] = k.mul(c[i], k.inv(k.from_int(static_cast<std::int64_t>(i + 1))));
  }
  return Poly(k, std::move(out));
}

Poly clear_low(const Poly& f, int h) {
  std::vector<Elem> c(f.coeffs().begin(), f.coeffs().end());
  for (int i = 0; i <= h && i < static_cast<int>(c.size()); ++i) c[i] = 0;
  return Poly(f.field(), std::move(c));
}

std::string to_pretty(const Poly& f) {
  if (f.is_zero()) return "0";
  const bool ext = f.field().f() > 1;
  std::ostringstream os;
  bool first = true;
  for (int i = f.degree(); i >= 0; --i) {
    const Elem c = f.coeff(static_cast<std::size_t>(i));
    if (c == 0) continue;
    if (!first) os << " + ";
    first = false;
    const bool show_coeff = c != 1 || i == 0;
    if (show_coeff) {
      if (ext) {
        os << '[' << c << ']';
      } else {
        os << c;
      }
    }
    if (i >= 1) os << 'x';
    if (i >= 2) os << '^' << i;
  }
  return os.str();
}

}  // namespace kfree
