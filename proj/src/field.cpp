#include "kfree/field.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "kfree/error.hpp"

namespace kfree {
namespace {

using Coeffs = std::vector<std::uint32_t>;

void trim(Coeffs& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  std::uint64_t result = 1, base = a % p;
  for (std::uint32_t e = p - 2; e; e >>= 1) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
  }
  return static_cast<std::uint32_t>(result);
}

// Remainder of a modulo m over GF(p); m nonzero.
Coeffs rem_mod_p(Coeffs a, const Coeffs& m, std::uint32_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const std::uint64_t lead_inv = inv_mod(m.back(), p);
  while (a.size() > dm) {
    const std::size_t shift = a.size() - 1 - dm;
    const std::uint64_t c = a.back() * lead_inv % p;
    for (std::size_t i = 0; i <= dm; ++i) {
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + (p - c) * m[i] % p) % p);
    }
    trim(a);
  }
  return a;
}

Coeffs mul_mod_p(const Coeffs& a, const Coeffs& b, const Coeffs& m, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Coeffs out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] = static_cast<std::uint32_t>((out[i + j] + std::uint64_t{a[i]} * b[j]) % p);
    }
  }
  return rem_mod_p(std::move(out), m, p);
}

Coeffs gcd_mod_p(Coeffs a, Coeffs b, std::uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Coeffs r = rem_mod_p(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// No factor of degree <= deg/2 means irreducible.
bool irreducible_mod_p(const Coeffs& g, std::uint32_t p) {
  const std::size_t deg = g.size() - 1;
  Coeffs xpow = rem_mod_p({0, 1}, g, p);
  for (std::size_t i = 1; i <= deg / 2; ++i) {
    Coeffs acc{1};
    for (std::uint32_t e = 0; e < p; ++e) acc = mul_mod_p(acc, xpow, g, p);
    xpow = acc;
    Coeffs diff = xpow;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = (diff[1] + p - 1) % p;
    trim(diff);
    if (gcd_mod_p(g, diff, p).size() != 1) return false;
  }
  return true;
}

Coeffs smallest_irreducible(std::uint32_t p, std::uint32_t f) {
  if (f == 1) return {0, 1};
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < f; ++i) count *= p;
  for (std::uint64_t t = 0; t < count; ++t) {
    Coeffs g(f + 1, 0);
    std::uint64_t v = t;
    for (std::uint32_t i = 0; i < f; ++i, v /= p) g[i] = static_cast<std::uint32_t>(v % p);
    g[f] = 1;
    if (g[0] == 0) continue;
    if (irreducible_mod_p(g, p)) return g;
  }
  throw std::logic_error("no irreducible polynomial found");
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::pair<std::uint32_t, std::uint32_t> prime_power_split(std::uint64_t q) {
  if (q < 2) return {0, 0};
  std::uint64_t p = 0;
  for (std::uint64_t d = 2; d <= q; ++d) {
    if (q % d == 0) {
      p = d;
      break;
    }
  }
  std::uint32_t f = 0;
  while (q % p == 0) {
    q /= p;
    ++f;
  }
  if (q != 1) return {0, 0};
  return {static_cast<std::uint32_t>(p), f};
}

Field::Field(std::uint32_t p, std::uint32_t f, std::vector<std::uint32_t> modulus)
    : p_(p), f_(f), q_(1), modulus_(std::move(modulus)) {
  for (std::uint32_t i = 0; i < f; ++i) q_ *= p;

  neg_.resize(q_);
  for (Elem a = 0; a < q_; ++a) {
    auto c = coords(a);
    for (auto& x : c) x = (p_ - x) % p_;
    neg_[a] = from_coords(c);
  }

  if (p_ != 2 && f_ > 1 && q_ <= 1024) {
    add_table_.resize(std::size_t{q_} * q_);
    for (Elem a = 0; a < q_; ++a) {
      const auto ca = coords(a);
      for (Elem b = 0; b < q_; ++b) {
        auto cb = coords(b);
        for (std::uint32_t i = 0; i < f_; ++i) cb[i] = (ca[i] + cb[i]) % p_;
        add_table_[std::size_t{a} * q_ + b] = static_cast<std::uint16_t>(from_coords(cb));
      }
    }
  }

  // Smallest element of multiplicative order q - 1.
  if (q_ > 2) {
    const auto factors = prime_factors(q_ - 1);
    auto slow_pow = [&](Elem a, std::uint64_t e) {
      Elem r = 1;
      for (; e; e >>= 1) {
        if (e & 1) r = mul_by_coords(r, a);
        a = mul_by_coords(a, a);
      }
      return r;
    };
    for (Elem g = 2; g < q_; ++g) {
      bool primitive = true;
      for (auto ell : factors) {
        if (slow_pow(g, (q_ - 1) / ell) == 1) {
          primitive = false;
          break;
        }
      }
      if (primitive) {
        gen_ = g;
        break;
      }
    }
  }
  if (f_ > 1) {
    exp_.resize(2 * std::size_t{q_ - 1});
    log_.assign(q_, 0);
    Elem x = 1;
    for (std::uint32_t i = 0; i < q_ - 1; ++i) {
      exp_[i] = x;
      exp_[i + q_ - 1] = x;
      log_[x] = i;
      x = mul_by_coords(x, gen_);
    }
  }
}

Elem Field::add(Elem a, Elem b) const {
  if (p_ == 2) return a ^ b;
  if (f_ == 1) {
    const Elem s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  if (!add_table_.empty()) return add_table_[std::size_t{a} * q_ + b];
  Elem out = 0, scale = 1;
  for (std::uint32_t i = 0; i < f_; ++i) {
    const Elem s = (a % p_ + b % p_) % p_;
    out += s * scale;
    scale *= p_;
    a /= p_;
    b /= p_;
  }
  return out;
}

Elem Field::mul(Elem a, Elem b) const {
  if (f_ == 1) return static_cast<Elem>(std::uint64_t{a} * b % p_);
  if (a == 0 || b == 0) return 0;
  return exp_[log_[a] + log_[b]];
}

Elem Field::inv(Elem a) const {
  if (a == 0) throw DivisionByZero("inverse of zero in " + name());
  if (f_ == 1) return inv_mod(a, p_);
  return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

Elem Field::pow(Elem a, std::uint64_t e) const {
  Elem r = 1;
  for (; e; e >>= 1) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
  }
  return r;
}

Elem Field::pth_root(Elem a) const {
  std::uint64_t e = 1;
  for (std::uint32_t i = 1; i < f_; ++i) e *= p_;
  return pow(a, e);
}

Elem Field::from_int(std::int64_t n) const {
  const std::int64_t r = n % static_cast<std::int64_t>(p_);
  return static_cast<Elem>(r < 0 ? r + p_ : r);
}

std::vector<std::uint32_t> Field::coords(Elem a) const {
  std::vector<std::uint32_t> c(f_);
  for (std::uint32_t i = 0; i < f_; ++i, a /= p_) c[i] = a % p_;
  return c;
}

Elem Field::from_coords(std::span<const std::uint32_t> c) const {
  if (c.size() > f_) throw DomainError("too many coordinates for " + name());
  Elem out = 0, scale = 1;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] >= p_) throw DomainError("coordinate out of range for " + name());
    out += c[i] * scale;
    scale *= p_;
  }
  return out;
}

Elem Field::mul_by_coords(Elem a, Elem b) const {
  Coeffs ca = coords(a), cb = coords(b);
  trim(ca);
  trim(cb);
  Coeffs prod = mul_mod_p(ca, cb, modulus_, p_);
  prod.resize(f_, 0);
  return from_coords(prod);
}

std::string Field::name() const {
  std::ostringstream os;
  os << "GF(" << p_;
  if (f_ > 1) os << '^' << f_;
  os << ')';
  return os.str();
}

const Field& make_field(std::uint32_t p, std::uint32_t f) {
  if (!is_prime(p)) throw DomainError("field characteristic " + std::to_string(p) + " is not prime");
  if (f == 0) throw DomainError("field degree must be at least 1");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < f; ++i) {
    q *= p;
    if (q > Field::kMaxOrder) throw DomainError("field order exceeds 2^16");
  }

  static std::mutex mu;
  static std::map<std::pair<std::uint32_t, std::uint32_t>, std::unique_ptr<Field>> registry;
  std::lock_guard lock(mu);
  auto& slot = registry[{p, f}];
  if (!slot) slot.reset(new Field(p, f, smallest_irreducible(p, f)));
  return *slot;
}

const Field& make_field_of_order(std::uint32_t q) {
  const auto [p, f] = prime_power_split(q);
  if (p == 0) throw DomainError(std::to_string(q) + " is not a prime power");
  return make_field(p, f);
}

FieldElement::FieldElement(const Field& field, Elem value) : field_(&field), value_(value) {
  if (value >= field.q()) throw DomainError("element encoding out of range for " + field.name());
}

namespace {
const Field& common(const FieldElement& a, const FieldElement& b) {
  if (&a.field() != &b.field()) {
    throw FieldMismatch("operands from " + a.field().name() + " and " + b.field().name());
  }
  return a.field();
}
}  // namespace

FieldElement FieldElement::inv() const { return {*field_, field_->inv(value_)}; }

FieldElement FieldElement::pow(std::uint64_t e) const { return {*field_, field_->pow(value_, e)}; }

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  const Field& k = common(a, b);
  return {k, k.add(a.value(), b.value())};
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  const Field& k = common(a, b);
  return {k, k.sub(a.value(), b.value())};
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  const Field& k = common(a, b);
  return {k, k.mul(a.value(), b.value())};
}

FieldElement operator/(const FieldElement& a, const FieldElement& b) {
  const Field& k = common(a, b);
  return {k, k.div(a.value(), b.value())};
}

}  // namespace kfree
